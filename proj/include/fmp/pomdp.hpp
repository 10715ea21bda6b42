#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fmp/errors.hpp"

namespace fmp {

// Absolute tolerance for all stochasticity (row sum) checks.
inline constexpr double kRowSumTolerance = 1e-9;

// Belief: probability vector over states. Entries >= 0, sum 1 within tolerance.
using Belief = std::vector<double>;

Belief uniform_belief(int num_states);
Belief point_belief(int num_states, int state);
bool is_distribution(std::span<const double> p, double tol = kRowSumTolerance);

// Finite tabular POMDP. Transition rows are conditioned on (action, state),
// observation rows on the next state only, and rewards are stored as the
// per-(state, action) expected value in [0, reward_max].
struct PomdpModel {
  int num_states = 0;
  int num_actions = 0;
  int num_observations = 0;
  std::vector<double> transition;       // [a][s][s'] row-major
  std::vector<double> observation;      // [s'][o] row-major
  std::vector<double> expected_reward;  // [s][a] row-major
  double reward_max = 1.0;
  double discount = 0.95;
  // Optional identifier lists carried by the parser; empty means indices.
  std::vector<std::string> state_names;
  std::vector<std::string> action_names;
  std::vector<std::string> observation_names;

  double transition_at(int a, int s, int s2) const {
    return transition[(static_cast<std::size_t>(a) * num_states + s) * num_states + s2];
  }
  double& transition_at(int a, int s, int s2) {
    return transition[(static_cast<std::size_t>(a) * num_states + s) * num_states + s2];
  }
  std::span<const double> transition_row(int a, int s) const {
    return {transition.data() + (static_cast<std::size_t>(a) * num_states + s) * num_states,
            static_cast<std::size_t>(num_states)};
  }
  double observation_at(int s2, int o) const {
    return observation[static_cast<std::size_t>(s2) * num_observations + o];
  }
  double& observation_at(int s2, int o) {
    return observation[static_cast<std::size_t>(s2) * num_observations + o];
  }
  std::span<const double> observation_row(int s2) const {
    return {observation.data() + static_cast<std::size_t>(s2) * num_observations,
            static_cast<std::size_t>(num_observations)};
  }
  double reward_at(int s, int a) const {
    return expected_reward[static_cast<std::size_t>(s) * num_actions + a];
  }
  double& reward_at(int s, int a) {
    return expected_reward[static_cast<std::size_t>(s) * num_actions + a];
  }

  void allocate();  // sizes the three tables to zero-filled dimensions
};

bool models_equal(const PomdpModel& a, const PomdpModel& b);

struct ModelViolation {
  std::string what;   // which invariant failed
  std::string where;  // e.g. "T[a=1][s=0]" or "R[s=2][a=0]"
};

struct ValidationReport {
  std::vector<ModelViolation> violations;
  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

// Checks row normalization, non-negativity, reward range and discount range.
ValidationReport validate_model(const PomdpModel& model);

struct FilterResult {
  Belief posterior;
  double obs_probability = 0.0;  // eta
  double expected_reward = 0.0;  // mean reward of (b, a), independent of o
};

// Pr(s') = sum_s T(s'|s,a) b(s)
std::vector<double> transition_marginal(const PomdpModel& model, const Belief& b, int action);

// Posterior(s') = Z(o|s') Pr(s') / eta. Throws ImpossibleObservation when eta = 0.
FilterResult bayes_filter(const PomdpModel& model, const Belief& b, int action, int obs);

// Entry o is the eta that bayes_filter(model, b, action, o) would report.
std::vector<double> observation_distribution(const PomdpModel& model, const Belief& b,
                                             int action);

// Mean one-step reward of (b, a).
double expected_reward(const PomdpModel& model, const Belief& b, int action);

struct ExactValue {
  double value = 0.0;
  std::optional<int> best_action;  // empty at horizon 0
};

// Brute-force expectimax over all action/observation branches, discounting
// each step and substituting leaf_value at the horizon. Testing oracle only:
// guarded by |A|^h * |O|^h <= 10^7 (BudgetExceeded otherwise).
ExactValue exact_expectimax_value(const PomdpModel& model, const Belief& b, int horizon,
                                  double leaf_value);

}  // namespace fmp
