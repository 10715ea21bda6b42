#include "fmp/pomdp.hpp"

#include <cmath>
#include <sstream>

namespace fmp {

Belief uniform_belief(int num_states) {
  return Belief(num_states, 1.0 / num_states);
}

Belief point_belief(int num_states, int state) {
  Belief b(num_states, 0.0);
  b[state] = 1.0;
  return b;
}

bool is_distribution(std::span<const double> p, double tol) {
  double sum = 0.0;
  for (double v : p) {
    if (v < 0.0 || !std::isfinite(v)) return false;
    sum += v;
  }
  return std::abs(sum - 1.0) <= tol;
}

void PomdpModel::allocate() {
  transition.assign(static_cast<std::size_t>(num_actions) * num_states * num_states, 0.0);
  observation.assign(static_cast<std::size_t>(num_states) * num_observations, 0.0);
  expected_reward.assign(static_cast<std::size_t>(num_states) * num_actions, 0.0);
}

bool models_equal(const PomdpModel& a, const PomdpModel& b) {
  return a.num_states == b.num_states && a.num_actions == b.num_actions &&
         a.num_observations == b.num_observations && a.transition == b.transition &&
         a.observation == b.observation && a.expected_reward == b.expected_reward &&
         a.reward_max == b.reward_max && a.discount == b.discount;
}

std::string ValidationReport::to_string() const {
  if (ok()) return "model valid";
  std::ostringstream os;
  os << violations.size() << " violation(s):";
  for (const auto& v : violations) os << "\n  " << v.where << ": " << v.what;
  return os.str();
}

namespace {

void check_row(std::span<const double> row, const std::string& where,
               std::vector<ModelViolation>& out) {
  double sum = 0.0;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (row[i] < 0.0 || !std::isfinite(row[i])) {
      out.push_back({"negative or non-finite entry at index " + std::to_string(i), where});
      return;
    }
    sum += row[i];
  }
  if (std::abs(sum - 1.0) > kRowSumTolerance) {
    std::ostringstream os;
    os << "row sums to " << sum;
    out.push_back({os.str(), where});
  }
}

}  // namespace

ValidationReport validate_model(const PomdpModel& model) {
  ValidationReport report;
  auto& out = report.violations;
  if (model.num_states <= 0 || model.num_actions <= 0 || model.num_observations <= 0) {
    out.push_back({"non-positive dimension", "model"});
    return report;
  }
  for (int a = 0; a < model.num_actions; ++a)
    for (int s = 0; s < model.num_states; ++s)
      check_row(model.transition_row(a, s),
                "T[a=" + std::to_string(a) + "][s=" + std::to_string(s) + "]", out);
  for (int s2 = 0; s2 < model.num_states; ++s2)
    check_row(model.observation_row(s2), "O[s'=" + std::to_string(s2) + "]", out);
  for (int s = 0; s < model.num_states; ++s)
    for (int a = 0; a < model.num_actions; ++a) {
      const double r = model.reward_at(s, a);
      if (!(r >= 0.0 && r <= model.reward_max))
        out.push_back({"reward " + std::to_string(r) + " outside [0, R_max]",
                       "R[s=" + std::to_string(s) + "][a=" + std::to_string(a) + "]"});
    }
  if (!(model.discount >= 0.0 && model.discount < 1.0))
    out.push_back({"discount " + std::to_string(model.discount) + " outside [0, 1)", "discount"});
  return report;
}

std::vector<double> transition_marginal(const PomdpModel& model, const Belief& b, int action) {
  std::vector<double> marginal(model.num_states, 0.0);
  for (int s = 0; s < model.num_states; ++s) {
    const double w = b[s];
    if (w == 0.0) continue;
    const auto row = model.transition_row(action, s);
    for (int s2 = 0; s2 < model.num_states; ++s2) marginal[s2] += row[s2] * w;
  }
  return marginal;
}

double expected_reward(const PomdpModel& model, const Belief& b, int action) {
  double r = 0.0;
  for (int s = 0; s < model.num_states; ++s) r += model.reward_at(s, action) * b[s];
  return r;
}

FilterResult bayes_filter(const PomdpModel& model, const Belief& b, int action, int obs) {
  FilterResult result;
  result.posterior = transition_marginal(model, b, action);
  double eta = 0.0;
  for (int s2 = 0; s2 < model.num_states; ++s2) {
    result.posterior[s2] *= model.observation_at(s2, obs);
    eta += result.posterior[s2];
  }
  if (eta <= 0.0)
    throw ImpossibleObservation("observation " + std::to_string(obs) +
                                " has zero probability under action " + std::to_string(action));
  for (double& p : result.posterior) p /= eta;
  result.obs_probability = eta;
  result.expected_reward = expected_reward(model, b, action);
  return result;
}

std::vector<double> observation_distribution(const PomdpModel& model, const Belief& b,
                                             int action) {
  const std::vector<double> marginal = transition_marginal(model, b, action);
  std::vector<double> dist(model.num_observations, 0.0);
  for (int s2 = 0; s2 < model.num_states; ++s2) {
    const double w = marginal[s2];
    if (w == 0.0) continue;
    const auto row = model.observation_row(s2);
    for (int o = 0; o < model.num_observations; ++o) dist[o] += row[o] * w;
  }
  return dist;
}

namespace {

ExactValue expectimax_recurse(const PomdpModel& model, const Belief& b, int horizon,
                              double leaf_value) {
  if (horizon == 0) return {leaf_value, std::nullopt};
  double best = 0.0;
  int best_action = -1;
  for (int a = 0; a < model.num_actions; ++a) {
    double value = expected_reward(model, b, a);
    const std::vector<double> obs_dist = observation_distribution(model, b, a);
    double continuation = 0.0;
    for (int o = 0; o < model.num_observations; ++o) {
      if (obs_dist[o] <= 0.0) continue;  // eta = 0 branches are never realized
      const FilterResult f = bayes_filter(model, b, a, o);
      continuation += f.obs_probability *
                      expectimax_recurse(model, f.posterior, horizon - 1, leaf_value).value;
    }
    value += model.discount * continuation;
    if (best_action < 0 || value > best) {
      best = value;
      best_action = a;
    }
  }
  return {best, best_action};
}

}  // namespace

ExactValue exact_expectimax_value(const PomdpModel& model, const Belief& b, int horizon,
                                  double leaf_value) {
  const double branches =
      std::pow(static_cast<double>(model.num_actions), horizon) *
      std::pow(static_cast<double>(model.num_observations), horizon);
  if (branches > 1e7)
    throw BudgetExceeded("expectimax enumeration would visit ~" + std::to_string(branches) +
                         " branches (guard: 1e7)");
  return expectimax_recurse(model, b, horizon, leaf_value);
}

}  // namespace fmp
