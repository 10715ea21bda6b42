#include "fmp/discretization.hpp"

#include <cmath>

#include "fmp/rng.hpp"

namespace fmp {

namespace {

// floor/ceil with slack for values computed from inexact reciprocals, so that
// e.g. 1/0.2 = 4.999999999999999 still counts 5 whole steps.
constexpr double kIntSlack = 1e-9;

double floor_tol(double x) { return std::floor(x + kIntSlack); }
double ceil_tol(double x) { return std::ceil(x - kIntSlack); }

}  // namespace

std::size_t GridKeyHash::operator()(const GridKey& k) const {
  std::uint64_t h = mix64(static_cast<std::uint64_t>(k.indices.size()));
  for (std::int32_t v : k.indices) h = mix64(h ^ static_cast<std::uint32_t>(v));
  std::uint64_t bits;
  static_assert(sizeof(bits) == sizeof(k.resolution));
  __builtin_memcpy(&bits, &k.resolution, sizeof(bits));
  return static_cast<std::size_t>(mix64(h ^ bits));
}

GridProjection grid_project(std::span<const double> b, double epsilon, bool renormalize) {
  GridProjection out;
  out.key.resolution = epsilon;
  out.key.indices.resize(b.size());
  out.point.resize(b.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    // round(b_i / eps) with exact halves going up
    const auto idx = static_cast<std::int32_t>(std::floor(b[i] / epsilon + 0.5));
    out.key.indices[i] = idx;
    out.point[i] = idx * epsilon;
    sum += out.point[i];
  }
  if (renormalize && sum > 0.0)
    for (double& p : out.point) p /= sum;
  return out;
}

PlanParams plan_params(double eps_v, double gamma, double reward_max) {
  if (!(eps_v > 0.0)) throw std::invalid_argument("eps_v must be positive");
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must be in (0, 1)");
  if (!(reward_max > 0.0)) throw std::invalid_argument("reward_max must be positive");
  const double ratio = (1.0 - gamma) * eps_v / (2.0 * reward_max);
  if (ratio >= 1.0)
    throw DegenerateTarget("target error " + std::to_string(eps_v) +
                           " >= 2 R_max/(1-gamma); horizon 0 already meets it");
  PlanParams params;
  params.target_error = eps_v;
  params.horizon_real = std::log(ratio) / std::log(gamma);
  params.horizon = static_cast<int>(ceil_tol(params.horizon_real));
  params.epsilon_b0 =
      (1.0 - gamma) * eps_v / (2.0 * gamma * reward_max * params.horizon_real);
  return params;
}

EpsilonSchedule epsilon_schedule(double eps_b0, double gamma, int h0) {
  if (!(eps_b0 > 0.0)) throw std::invalid_argument("eps_b0 must be positive");
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must be in (0, 1)");
  EpsilonSchedule schedule;
  schedule.epsilons.resize(h0 + 1);
  double eps = eps_b0;
  for (int d = 0; d <= h0; ++d) {
    schedule.epsilons[d] = std::min(1.0, eps);
    eps /= gamma;
  }
  return schedule;
}

double lipschitz_bound(int height, double gamma, double reward_max, double leaf_lipschitz) {
  const double g = std::pow(gamma, height);
  return reward_max * (1.0 - g) / (1.0 - gamma) + g * leaf_lipschitz;
}

double error_bound(int height, std::span<const double> delta, std::span<const double> lipschitz,
                   double gamma, double leaf_error) {
  double total = std::pow(gamma, height) * leaf_error;
  for (int i = 0; i < height; ++i)
    total += std::pow(gamma, height - i) * lipschitz[i] * delta[i];
  return total;
}

double memory_bound_log10(double eps_b0, double gamma, int num_states) {
  if (!(eps_b0 > 0.0)) throw std::invalid_argument("eps_b0 must be positive");
  return num_states * std::log10(ceil_tol(2.0 / (eps_b0 * (1.0 - gamma))));
}

double grid_cell_count_log10(double epsilon, int dim) {
  if (!(epsilon > 0.0 && epsilon <= 1.0))
    throw std::invalid_argument("epsilon must be in (0, 1]");
  return dim * std::log10(1.0 + floor_tol(1.0 / epsilon));
}

}  // namespace fmp
