#pragma once

#include <cstdint>

#include "fmp/pomdp.hpp"

namespace fmp {

// Seeded random tabular POMDP family. Sparsity sp controls both the support
// size of every distribution row (m = max(1, round((1-sp)|S|)) states, same
// for observation rows over |O|) and the fraction of zero expected rewards.
struct RandomPomdpSpec {
  int num_states = 30;
  int num_actions = 4;
  int num_observations = 0;  // 0 means |O| = |S|
  double sparsity = 0.3;
  double reward_max = 1.0;
  double discount = 0.95;
  std::uint64_t seed = 0;
};

// Deterministic in the seed, bit for bit. Draw order: transition rows in
// (action, state) order, then observation rows by next state, then rewards in
// (state, action) order; each row draws its support by partial shuffle and
// then one uniform(0,1] weight per support entry.
PomdpModel generate_random_pomdp(const RandomPomdpSpec& spec);

}  // namespace fmp
