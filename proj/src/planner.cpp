#include "fmp/planner.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "fmp/rng.hpp"

namespace fmp {

namespace {

std::uint64_t node_stream(std::uint64_t seed, int depth, std::size_t node, int action) {
  std::uint64_t s = derive_seed(seed, static_cast<std::uint64_t>(depth));
  s = derive_seed(s, node);
  return derive_seed(s, static_cast<std::uint64_t>(action));
}

}  // namespace

BeliefTree build_tree(const BeliefSpace& space, std::span<const double> root_belief,
                      const EpsilonSchedule& schedule, int horizon,
                      const SamplingConfig& sampling, std::size_t level_node_cap, bool dedup) {
  if (horizon > schedule.horizon())
    throw std::invalid_argument("horizon exceeds the epsilon schedule length");
  BeliefTree tree;
  tree.schedule = schedule;
  tree.dimension = space.dimension();
  tree.levels.resize(horizon + 1);

  BeliefNode root;
  root.belief.assign(root_belief.begin(), root_belief.end());
  root.key = space.project(root_belief, schedule.epsilons[0]).key;
  tree.levels[0].nodes.push_back(std::move(root));

  const bool sampled = sampling.mode == SamplingConfig::Mode::kSampleObservations;
  std::unordered_map<NodeKey, std::uint32_t, NodeKeyHash> cells;
  std::vector<std::pair<int, double>> drawn;  // (obs, weight) buffer for sampled mode

  for (int d = 0; d < horizon; ++d) {
    auto& level = tree.levels[d];
    auto& next = tree.levels[d + 1];
    const double child_eps = schedule.epsilons[d + 1];
    cells.clear();

    for (std::size_t n = 0; n < level.nodes.size(); ++n) {
      auto& node = level.nodes[n];
      node.edges_begin = static_cast<std::uint32_t>(level.edges.size());
      for (int a = 0; a < space.num_actions(); ++a) {
        drawn.clear();
        if (sampled) {
          const auto dist = space.observation_distribution(node.belief, a);
          Rng rng(node_stream(sampling.rng_seed, d, n, a));
          const int k = sampling.samples_per_node;
          for (int i = 0; i < k; ++i) {
            const int o = rng.sample_weighted(dist);
            auto it = std::find_if(drawn.begin(), drawn.end(),
                                   [o](const auto& p) { return p.first == o; });
            if (it == drawn.end()) drawn.emplace_back(o, 1.0 / k);
            else it->second += 1.0 / k;
          }
          std::sort(drawn.begin(), drawn.end());
        } else {
          for (int o : space.observation_support(node.belief, a)) drawn.emplace_back(o, 0.0);
        }

        for (const auto& [o, weight] : drawn) {
          SpaceFilterResult f = space.filter(node.belief, a, o);
          SpaceProjection proj = space.project(f.posterior, child_eps);
          std::uint32_t child;
          const auto it = dedup ? cells.find(proj.key) : cells.end();
          if (it != cells.end()) {
            child = it->second;
          } else {
            child = static_cast<std::uint32_t>(next.nodes.size());
            if (dedup) cells.emplace(proj.key, child);
            BeliefNode c;
            c.key = std::move(proj.key);
            c.belief = std::move(f.posterior);
            next.nodes.push_back(std::move(c));
            if (next.nodes.size() > level_node_cap)
              throw MemoryBudgetExceeded(
                  "level " + std::to_string(d + 1) + " exceeded the node cap of " +
                  std::to_string(level_node_cap) + "; coarsen the epsilon schedule");
          }
          level.edges.push_back({a, o, sampled ? weight : f.obs_probability,
                                 f.expected_reward, child});
        }
      }
      node.edges_end = static_cast<std::uint32_t>(level.edges.size());
    }

    // Canonical key order, so tree layout (and any per-node rng derived from
    // it) does not depend on expansion incidentals.
    auto& nodes = next.nodes;
    std::vector<std::uint32_t> order(nodes.size());
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::uint32_t x, std::uint32_t y) { return nodes[x].key < nodes[y].key; });
    std::vector<std::uint32_t> rank(nodes.size());
    for (std::uint32_t i = 0; i < order.size(); ++i) rank[order[i]] = i;
    std::vector<BeliefNode> sorted;
    sorted.reserve(nodes.size());
    for (std::uint32_t i : order) sorted.push_back(std::move(nodes[i]));
    nodes = std::move(sorted);
    for (auto& e : level.edges) e.child = rank[e.child];
  }
  return tree;
}

InductionResult backward_induction(BeliefTree& tree, double discount, double leaf_value) {
  const int h = tree.height();
  for (auto& leaf : tree.levels[h].nodes) leaf.value = leaf_value;

  InductionResult result;
  for (int d = h - 1; d >= 0; --d) {
    auto& level = tree.levels[d];
    const auto& children = tree.levels[d + 1].nodes;
    for (auto& node : level.nodes) {
      double best = 0.0;
      int best_action = -1;
      std::uint32_t i = node.edges_begin;
      while (i < node.edges_end) {
        const int action = level.edges[i].action;
        double q = 0.0;
        for (; i < node.edges_end && level.edges[i].action == action; ++i) {
          const Edge& e = level.edges[i];
          q += e.obs_probability * (e.expected_reward + discount * children[e.child].value);
        }
        if (best_action < 0 || q > best) {
          best = q;
          best_action = action;
        }
      }
      node.value = best_action < 0 ? leaf_value : best;
      if (d == 0) {
        result.root_value = node.value;
        if (best_action >= 0) result.best_action = best_action;
      }
    }
  }
  if (h == 0) result.root_value = tree.levels[0].nodes.front().value;
  return result;
}

DepthStats depth_stats(const BeliefTree& tree) {
  DepthStats stats;
  stats.levels.resize(tree.levels.size());
  for (std::size_t d = 0; d < tree.levels.size(); ++d) {
    auto& s = stats.levels[d];
    s.unique_nodes = tree.levels[d].nodes.size();
    s.edges = tree.levels[d].edges.size();
    s.epsilon = tree.schedule.epsilons[d];
    s.cell_bound_log10 = grid_cell_count_log10(s.epsilon, tree.dimension);
  }
  return stats;
}

PlanResult plan(const BeliefSpace& space, std::span<const double> belief,
                const PlanConfig& config) {
  EpsilonSchedule schedule;
  int horizon;
  if (config.target_error) {
    const PlanParams params =
        plan_params(*config.target_error, space.discount(), space.reward_max());
    schedule = epsilon_schedule(params.epsilon_b0, space.discount(), params.horizon);
    horizon = config.horizon >= 0 ? config.horizon : params.horizon;
  } else if (config.schedule) {
    schedule = *config.schedule;
    horizon = config.horizon >= 0 ? config.horizon : schedule.horizon();
  } else {
    throw std::invalid_argument("plan config needs a schedule or a target error");
  }

  PlanResult result;
  if (horizon == 0) {
    result.action = 0;
    result.root_value = config.leaf_value;
    result.stats.levels.push_back({1, 0, schedule.epsilons[0],
                                   grid_cell_count_log10(schedule.epsilons[0],
                                                         space.dimension())});
    return result;
  }

  BeliefTree tree = build_tree(space, belief, schedule, horizon, config.sampling,
                               config.level_node_cap, config.dedup);
  const InductionResult value = backward_induction(tree, space.discount(), config.leaf_value);
  result.action = value.best_action.value_or(0);
  result.root_value = value.root_value;
  result.stats = depth_stats(tree);
  return result;
}

}  // namespace fmp
