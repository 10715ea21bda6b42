#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fmp/belief_space.hpp"
#include "fmp/discretization.hpp"

namespace fmp {

struct SamplingConfig {
  enum class Mode { kExactEnumeration, kSampleObservations };
  Mode mode = Mode::kExactEnumeration;
  int samples_per_node = 8;  // observation draws per (node, action) when sampling
  std::uint64_t rng_seed = 0;
};

struct Edge {
  int action = 0;
  int observation = 0;
  double obs_probability = 0.0;  // eta (exact) or draw count / k (sampled)
  double expected_reward = 0.0;
  std::uint32_t child = 0;  // index into the next level's nodes
};

struct BeliefNode {
  NodeKey key;
  std::vector<double> belief;  // representative: first posterior that hit this cell
  double value = 0.0;          // filled by backward induction
  std::uint32_t edges_begin = 0;
  std::uint32_t edges_end = 0;
};

// Level-indexed tree of unique discretized belief nodes. levels[d].edges holds
// the outgoing edges of that level's nodes, contiguous per node and grouped by
// action in ascending order.
struct BeliefTree {
  struct Level {
    std::vector<BeliefNode> nodes;
    std::vector<Edge> edges;
  };
  std::vector<Level> levels;
  EpsilonSchedule schedule;
  int dimension = 0;  // cover dimension of the space the tree was built in

  int height() const { return static_cast<int>(levels.size()) - 1; }
};

struct PlanConfig {
  // Either an explicit per-depth schedule or a target error from which
  // plan_params/epsilon_schedule derive one.
  std::optional<EpsilonSchedule> schedule;
  std::optional<double> target_error;
  int horizon = -1;  // default: the schedule's horizon
  double leaf_value = 0.0;
  SamplingConfig sampling;
  std::size_t level_node_cap = 1'000'000;
  bool dedup = true;  // testing hook: false treats every child as unique
};

struct DepthStats {
  struct Level {
    std::size_t unique_nodes = 0;
    std::size_t edges = 0;
    double epsilon = 1.0;
    double cell_bound_log10 = 0.0;  // log10 |A(eps_d)| at the space dimension
  };
  std::vector<Level> levels;
};

struct InductionResult {
  double root_value = 0.0;
  std::optional<int> best_action;  // empty when the root is a leaf
};

struct PlanResult {
  int action = 0;
  double root_value = 0.0;
  DepthStats stats;
};

// Breadth-first construction: every unique node at depth d is expanded for
// every action and every supported (or sampled) observation; posteriors are
// keyed on the depth-(d+1) grid and merged per key. Deterministic given the
// sampling seed.
BeliefTree build_tree(const BeliefSpace& space, std::span<const double> root_belief,
                      const EpsilonSchedule& schedule, int horizon,
                      const SamplingConfig& sampling = {},
                      std::size_t level_node_cap = 1'000'000, bool dedup = true);

// Bottom-up value pass; fills node values in place. Ties at the root argmax
// break toward the lowest action index.
InductionResult backward_induction(BeliefTree& tree, double discount, double leaf_value);

DepthStats depth_stats(const BeliefTree& tree);

PlanResult plan(const BeliefSpace& space, std::span<const double> belief,
                const PlanConfig& config);

}  // namespace fmp
