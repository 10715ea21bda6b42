#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fmp/discretization.hpp"
#include "fmp/pomdp.hpp"

namespace fmp {

// Planner-facing key of a discretization cell. For tabular beliefs these are
// the grid indices; factored spaces may prepend discrete coordinates (for
// example an agent position) that must never be merged across.
struct NodeKey {
  std::vector<std::int32_t> v;
  bool operator==(const NodeKey&) const = default;
  bool operator<(const NodeKey& o) const { return v < o.v; }
};

struct NodeKeyHash {
  std::size_t operator()(const NodeKey& k) const;
};

struct SpaceFilterResult {
  std::vector<double> posterior;
  double obs_probability = 0.0;
  double expected_reward = 0.0;
};

struct SpaceProjection {
  NodeKey key;
  std::vector<double> point;  // grid representative (renormalized when meaningful)
};

// Belief-space abstraction the planner runs against. Beliefs are opaque
// vectors owned by the space; flat simplex vectors for tabular models,
// encoded factored forms elsewhere. All methods must be pure so one space
// instance can serve concurrent planners.
class BeliefSpace {
 public:
  virtual ~BeliefSpace() = default;

  virtual int num_actions() const = 0;
  // Number of grid-discretized coordinates (the cover dimension).
  virtual int dimension() const = 0;
  virtual double discount() const = 0;
  // Upper bound on a single-step expected reward, after any rescaling.
  virtual double reward_max() const = 0;

  // Observations with positive probability from (belief, action), ascending.
  virtual std::vector<int> observation_support(std::span<const double> belief,
                                               int action) const = 0;
  // Full observation distribution (used by sampled-observation expansion).
  virtual std::vector<double> observation_distribution(std::span<const double> belief,
                                                       int action) const = 0;
  virtual SpaceFilterResult filter(std::span<const double> belief, int action,
                                   int obs) const = 0;
  virtual SpaceProjection project(std::span<const double> belief, double epsilon) const = 0;
};

// Flat tabular beliefs over a PomdpModel.
class TabularBeliefSpace final : public BeliefSpace {
 public:
  explicit TabularBeliefSpace(const PomdpModel& model) : model_(&model) {}

  int num_actions() const override { return model_->num_actions; }
  int dimension() const override { return model_->num_states; }
  double discount() const override { return model_->discount; }
  double reward_max() const override { return model_->reward_max; }

  std::vector<int> observation_support(std::span<const double> belief,
                                       int action) const override;
  std::vector<double> observation_distribution(std::span<const double> belief,
                                               int action) const override;
  SpaceFilterResult filter(std::span<const double> belief, int action, int obs) const override;
  SpaceProjection project(std::span<const double> belief, double epsilon) const override;

  const PomdpModel& model() const { return *model_; }

 private:
  const PomdpModel* model_;
};

}  // namespace fmp
