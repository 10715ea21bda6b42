#include "fmp/random_pomdp.hpp"

#include <cmath>
#include <numeric>
#include <vector>

#include "fmp/rng.hpp"

namespace fmp {

namespace {

// First m entries of a seeded partial Fisher-Yates shuffle of 0..n-1.
void sample_support(Rng& rng, int n, int m, std::vector<int>& pool, std::vector<int>& out) {
  pool.resize(n);
  std::iota(pool.begin(), pool.end(), 0);
  out.clear();
  for (int i = 0; i < m; ++i) {
    const int j = i + static_cast<int>(rng.next_below(n - i));
    std::swap(pool[i], pool[j]);
    out.push_back(pool[i]);
  }
}

void fill_row(Rng& rng, double* row, int n, int m, std::vector<int>& pool,
              std::vector<int>& support) {
  sample_support(rng, n, m, pool, support);
  double total = 0.0;
  for (int idx : support) {
    row[idx] = rng.next_double_open_closed();
    total += row[idx];
  }
  for (int idx : support) row[idx] /= total;
}

}  // namespace

PomdpModel generate_random_pomdp(const RandomPomdpSpec& spec) {
  if (spec.num_states <= 0 || spec.num_actions <= 0)
    throw std::invalid_argument("num_states and num_actions must be positive");
  if (!(spec.sparsity > 0.0 && spec.sparsity < 1.0))
    throw std::invalid_argument("sparsity must lie in (0, 1)");

  PomdpModel model;
  model.num_states = spec.num_states;
  model.num_actions = spec.num_actions;
  model.num_observations = spec.num_observations > 0 ? spec.num_observations : spec.num_states;
  model.reward_max = spec.reward_max;
  model.discount = spec.discount;
  model.allocate();

  Rng rng(spec.seed);
  std::vector<int> pool, support;
  const int m_states =
      std::max(1, static_cast<int>(std::lround((1.0 - spec.sparsity) * model.num_states)));
  const int m_obs =
      std::max(1, static_cast<int>(std::lround((1.0 - spec.sparsity) * model.num_observations)));

  for (int a = 0; a < model.num_actions; ++a)
    for (int s = 0; s < model.num_states; ++s)
      fill_row(rng, &model.transition_at(a, s, 0), model.num_states, m_states, pool, support);

  for (int s2 = 0; s2 < model.num_states; ++s2)
    fill_row(rng, &model.observation_at(s2, 0), model.num_observations, m_obs, pool, support);

  for (int s = 0; s < model.num_states; ++s)
    for (int a = 0; a < model.num_actions; ++a) {
      const bool zero = rng.next_double() < spec.sparsity;
      const double draw = rng.next_double_open_closed();  // consumed either way
      model.reward_at(s, a) = zero ? 0.0 : spec.reward_max * draw;
    }

  return model;
}

}  // namespace fmp
