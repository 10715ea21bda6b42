#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fmp/errors.hpp"

namespace fmp {

// Cell of the coordinate grid with spacing epsilon over [0,1]^dim.
// Keys compare equal iff both the resolution and the index vector match.
struct GridKey {
  std::vector<std::int32_t> indices;
  double resolution = 1.0;

  bool operator==(const GridKey&) const = default;
};

struct GridKeyHash {
  std::size_t operator()(const GridKey& k) const;
};

struct GridProjection {
  GridKey key;
  std::vector<double> point;  // indices * epsilon; off the simplex in general
};

// Rounds every coordinate to the nearest multiple of epsilon (exact half
// steps round up). With renormalize the point is L1-normalized; a point that
// rounds to all zeros is returned unchanged (no mass to scale).
GridProjection grid_project(std::span<const double> b, double epsilon, bool renormalize = false);

// Per-depth grid resolutions, index 0 = root.
struct EpsilonSchedule {
  std::vector<double> epsilons;
  int horizon() const { return static_cast<int>(epsilons.size()) - 1; }
};

struct PlanParams {
  double target_error = 0.0;  // eps_v
  double horizon_real = 0.0;  // h0 before rounding
  int horizon = 0;            // ceil(h0), used as tree depth
  double epsilon_b0 = 0.0;    // root grid resolution
};

// Horizon and root resolution achieving |V_hat - V*| <= eps_v:
//   h0 = log_gamma((1-gamma) eps_v / (2 R_max))
//   eps_b0 = (1-gamma) eps_v / (2 gamma R_max h0)
// Throws DegenerateTarget when eps_v >= 2 R_max / (1-gamma).
PlanParams plan_params(double eps_v, double gamma, double reward_max);

// eps_d = min(1, eps_b0 / gamma^d) for d = 0..h0. Spacing above 1 is
// meaningless for coordinates in [0,1], hence the cap.
EpsilonSchedule epsilon_schedule(double eps_b0, double gamma, int h0);

// Value-function Lipschitz constant at height i (height 0 = leaves):
//   L_i <= R_max (1 - gamma^i)/(1 - gamma) + gamma^i L_0
double lipschitz_bound(int height, double gamma, double reward_max, double leaf_lipschitz);

// Value error at height h given per-height cover radii and Lipschitz
// constants (vectors of length h) and leaf error eps_0:
//   eps_h <= sum_i gamma^(h-i) L_i delta_i + gamma^h eps_0
double error_bound(int height, std::span<const double> delta, std::span<const double> lipschitz,
                   double gamma, double leaf_error);

// log10 of the total-memory bound ceil(2/(eps_b0 (1-gamma)))^S. Kept in log
// space; the raw value overflows for any interesting parameters.
double memory_bound_log10(double eps_b0, double gamma, int num_states);

// log10 |A(eps)| = dim * log10(1 + floor(1/eps)) for one grid level.
double grid_cell_count_log10(double epsilon, int dim);

}  // namespace fmp
