#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fmp/belief_space.hpp"
#include "fmp/rng.hpp"

namespace fmp {

// RS[n, k]: an n x n grid searched for k rocks of hidden quality. The agent
// knows every position; only the k good/bad bits are uncertain. Actions are
// N, S, E, W, sample, check_1..check_k (|A| = k + 5). Moving east off the
// right edge exits with +10; sampling a good rock pays +10 and degrades it,
// a bad rock (or bare ground) costs -10; check_i returns a binary reading
// that is correct with probability 0.5 (1 + 2^(-dist/d0)).
struct RockSampleSpec {
  int n = 7;
  int k = 8;
  std::vector<std::pair<int, int>> rock_positions;  // empty: seeded uniform
  double half_efficiency_distance = 20.0;           // d0
  std::uint64_t seed = 0;                           // layout seed when positions empty
};

// One `x y` pair per line, `#` comments.
std::vector<std::pair<int, int>> load_rock_layout(const std::string& path);

struct RockSampleState {
  int x = 0;  // column; east edge is x = n-1
  int y = 0;
  std::uint32_t good = 0;  // bit i set = rock i is good
  bool terminal = false;
};

struct RockStepResult {
  RockSampleState state;
  int observation = 0;
  double reward = 0.0;  // original units (+-10 / 0)
};

class RockSampleEnv {
 public:
  static constexpr int kObsNone = 0;
  static constexpr int kObsBad = 1;
  static constexpr int kObsGood = 2;
  static constexpr int kActionNorth = 0;
  static constexpr int kActionSouth = 1;
  static constexpr int kActionEast = 2;
  static constexpr int kActionWest = 3;
  static constexpr int kActionSample = 4;
  static constexpr int kActionCheck = 5;  // kActionCheck + i checks rock i

  explicit RockSampleEnv(RockSampleSpec spec);

  const RockSampleSpec& spec() const { return spec_; }
  int num_actions() const { return spec_.k + 5; }
  int num_observations() const { return 3; }
  const std::vector<std::pair<int, int>>& rocks() const { return spec_.rock_positions; }
  int rock_at(int x, int y) const;  // -1 when the cell has no rock

  double check_accuracy(int x, int y, int rock) const {
    return accuracy_[static_cast<std::size_t>(y * spec_.n + x) * spec_.k + rock];
  }

  // Planner-side affine map of rewards onto [0, 1] (planning models require
  // non-negative rewards). reward = 20 * rescaled - 10.
  double rescale_reward(double original) const { return (original + 10.0) / 20.0; }
  double rescaled_reward_max() const { return 1.0; }

  RockSampleState initial_state(Rng& rng) const;  // start (0, n/2), fair hidden bits
  // True dynamics, original-unit rewards. Throws TerminalState from a
  // terminal state and InvalidAction for an out-of-range action index.
  RockStepResult step(const RockSampleState& state, int action, Rng& rng) const;

 private:
  RockSampleSpec spec_;
  std::vector<double> accuracy_;  // [cell][rock]
};

// Factored belief: the deterministic part (agent cell, or n*n once terminal)
// followed by k per-rock goodness probabilities. Product form is closed under
// every action, so this is exact inference.
namespace factored_rock_belief {
inline int position_code(const RockSampleState& s, int n) {
  return s.terminal ? n * n : s.y * n + s.x;
}
std::vector<double> initial(const RockSampleEnv& env);
}  // namespace factored_rock_belief

class RockSampleBeliefSpace final : public BeliefSpace {
 public:
  RockSampleBeliefSpace(const RockSampleEnv& env, double discount)
      : env_(&env), discount_(discount) {}

  int num_actions() const override { return env_->num_actions(); }
  int dimension() const override { return env_->spec().k; }
  double discount() const override { return discount_; }
  double reward_max() const override { return env_->rescaled_reward_max(); }

  std::vector<int> observation_support(std::span<const double> belief,
                                       int action) const override;
  std::vector<double> observation_distribution(std::span<const double> belief,
                                               int action) const override;
  // Expected rewards come out rescaled; a terminal belief self-loops with the
  // rescaled zero reward so that every planning branch keeps full depth.
  SpaceFilterResult filter(std::span<const double> belief, int action, int obs) const override;
  SpaceProjection project(std::span<const double> belief, double epsilon) const override;

  const RockSampleEnv& env() const { return *env_; }

 private:
  const RockSampleEnv* env_;
  double discount_;
};

}  // namespace fmp
