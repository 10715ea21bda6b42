#include "fmp/belief_space.hpp"

#include "fmp/rng.hpp"

namespace fmp {

std::size_t NodeKeyHash::operator()(const NodeKey& k) const {
  std::uint64_t h = mix64(static_cast<std::uint64_t>(k.v.size()));
  for (std::int32_t x : k.v) h = mix64(h ^ static_cast<std::uint32_t>(x));
  return static_cast<std::size_t>(h);
}

std::vector<int> TabularBeliefSpace::observation_support(std::span<const double> belief,
                                                         int action) const {
  const Belief b(belief.begin(), belief.end());
  const auto dist = fmp::observation_distribution(*model_, b, action);
  std::vector<int> support;
  for (int o = 0; o < model_->num_observations; ++o)
    if (dist[o] > 0.0) support.push_back(o);
  return support;
}

std::vector<double> TabularBeliefSpace::observation_distribution(std::span<const double> belief,
                                                                 int action) const {
  const Belief b(belief.begin(), belief.end());
  return fmp::observation_distribution(*model_, b, action);
}

SpaceFilterResult TabularBeliefSpace::filter(std::span<const double> belief, int action,
                                             int obs) const {
  const Belief b(belief.begin(), belief.end());
  FilterResult r = bayes_filter(*model_, b, action, obs);
  return {std::move(r.posterior), r.obs_probability, r.expected_reward};
}

SpaceProjection TabularBeliefSpace::project(std::span<const double> belief,
                                            double epsilon) const {
  GridProjection g = grid_project(belief, epsilon, /*renormalize=*/true);
  return {NodeKey{std::move(g.key.indices)}, std::move(g.point)};
}

}  // namespace fmp
