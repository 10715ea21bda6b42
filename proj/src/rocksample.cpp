#include "fmp/rocksample.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "fmp/errors.hpp"

namespace fmp {

std::vector<std::pair<int, int>> load_rock_layout(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open rock layout '" + path + "'");
  std::vector<std::pair<int, int>> rocks;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream is(line);
    int x, y;
    if (is >> x >> y) rocks.emplace_back(x, y);
    else if (!line.empty() && line.find_first_not_of(" \t\r") != std::string::npos)
      throw SyntaxError(number, "expected 'x y'");
  }
  return rocks;
}

RockSampleEnv::RockSampleEnv(RockSampleSpec spec) : spec_(std::move(spec)) {
  if (spec_.n <= 0 || spec_.k <= 0) throw std::invalid_argument("n and k must be positive");
  if (spec_.k > 30) throw std::invalid_argument("k is limited to 30 (goodness bit mask)");
  if (spec_.rock_positions.empty()) {
    // Seeded-uniform distinct cells via partial shuffle.
    Rng rng(spec_.seed);
    const int cells = spec_.n * spec_.n;
    if (spec_.k > cells) throw std::invalid_argument("more rocks than cells");
    std::vector<int> pool(cells);
    std::iota(pool.begin(), pool.end(), 0);
    for (int i = 0; i < spec_.k; ++i) {
      const int j = i + static_cast<int>(rng.next_below(cells - i));
      std::swap(pool[i], pool[j]);
      spec_.rock_positions.emplace_back(pool[i] % spec_.n, pool[i] / spec_.n);
    }
  }
  if (static_cast<int>(spec_.rock_positions.size()) != spec_.k)
    throw std::invalid_argument("rock layout size does not match k");
  for (const auto& [x, y] : spec_.rock_positions)
    if (x < 0 || x >= spec_.n || y < 0 || y >= spec_.n)
      throw std::invalid_argument("rock outside the grid");
  for (std::size_t i = 0; i < spec_.rock_positions.size(); ++i)
    for (std::size_t j = i + 1; j < spec_.rock_positions.size(); ++j)
      if (spec_.rock_positions[i] == spec_.rock_positions[j])
        throw std::invalid_argument("duplicate rock position");

  accuracy_.resize(static_cast<std::size_t>(spec_.n) * spec_.n * spec_.k);
  for (int y = 0; y < spec_.n; ++y)
    for (int x = 0; x < spec_.n; ++x)
      for (int r = 0; r < spec_.k; ++r) {
        const auto& [rx, ry] = spec_.rock_positions[r];
        const double dist = std::hypot(x - rx, y - ry);
        accuracy_[static_cast<std::size_t>(y * spec_.n + x) * spec_.k + r] =
            0.5 * (1.0 + std::exp2(-dist / spec_.half_efficiency_distance));
      }
}

int RockSampleEnv::rock_at(int x, int y) const {
  for (std::size_t i = 0; i < spec_.rock_positions.size(); ++i)
    if (spec_.rock_positions[i] == std::make_pair(x, y)) return static_cast<int>(i);
  return -1;
}

RockSampleState RockSampleEnv::initial_state(Rng& rng) const {
  RockSampleState s;
  s.x = 0;
  s.y = spec_.n / 2;
  for (int i = 0; i < spec_.k; ++i)
    if (rng.next_double() < 0.5) s.good |= 1u << i;
  return s;
}

RockStepResult RockSampleEnv::step(const RockSampleState& state, int action, Rng& rng) const {
  if (state.terminal) throw TerminalState("episode already ended");
  if (action < 0 || action >= num_actions())
    throw InvalidAction("action " + std::to_string(action) + " out of range");

  RockStepResult out;
  out.state = state;
  out.observation = kObsNone;
  switch (action) {
    case kActionNorth:
      out.state.y = std::min(state.y + 1, spec_.n - 1);
      break;
    case kActionSouth:
      out.state.y = std::max(state.y - 1, 0);
      break;
    case kActionEast:
      if (state.x == spec_.n - 1) {
        out.state.terminal = true;
        out.reward = 10.0;
      } else {
        out.state.x = state.x + 1;
      }
      break;
    case kActionWest:
      out.state.x = std::max(state.x - 1, 0);
      break;
    case kActionSample: {
      const int rock = rock_at(state.x, state.y);
      if (rock >= 0 && (state.good >> rock) & 1u) {
        out.reward = 10.0;
        out.state.good &= ~(1u << rock);  // collected rocks degrade to bad
      } else {
        out.reward = -10.0;
      }
      break;
    }
    default: {
      const int rock = action - kActionCheck;
      const double acc = check_accuracy(state.x, state.y, rock);
      const bool good = (state.good >> rock) & 1u;
      const bool correct = rng.next_double() < acc;
      out.observation = (good == correct) ? kObsGood : kObsBad;
      break;
    }
  }
  return out;
}

std::vector<double> factored_rock_belief::initial(const RockSampleEnv& env) {
  std::vector<double> belief(env.spec().k + 1, 0.5);
  RockSampleState start;
  start.x = 0;
  start.y = env.spec().n / 2;
  belief[0] = position_code(start, env.spec().n);
  return belief;
}

namespace {

struct DecodedBelief {
  int x = 0, y = 0;
  bool terminal = false;
};

DecodedBelief decode(std::span<const double> belief, int n) {
  DecodedBelief d;
  const int code = static_cast<int>(belief[0]);
  if (code >= n * n) {
    d.terminal = true;
  } else {
    d.x = code % n;
    d.y = code / n;
  }
  return d;
}

}  // namespace

std::vector<int> RockSampleBeliefSpace::observation_support(std::span<const double> belief,
                                                            int action) const {
  const auto dist = observation_distribution(belief, action);
  std::vector<int> support;
  for (int o = 0; o < 3; ++o)
    if (dist[o] > 0.0) support.push_back(o);
  return support;
}

std::vector<double> RockSampleBeliefSpace::observation_distribution(
    std::span<const double> belief, int action) const {
  std::vector<double> dist(3, 0.0);
  const auto d = decode(belief, env_->spec().n);
  if (d.terminal || action < RockSampleEnv::kActionCheck) {
    dist[RockSampleEnv::kObsNone] = 1.0;
    return dist;
  }
  const int rock = action - RockSampleEnv::kActionCheck;
  const double acc = env_->check_accuracy(d.x, d.y, rock);
  const double p = belief[1 + rock];
  dist[RockSampleEnv::kObsGood] = p * acc + (1.0 - p) * (1.0 - acc);
  dist[RockSampleEnv::kObsBad] = 1.0 - dist[RockSampleEnv::kObsGood];
  return dist;
}

SpaceFilterResult RockSampleBeliefSpace::filter(std::span<const double> belief, int action,
                                                int obs) const {
  const int n = env_->spec().n;
  SpaceFilterResult out;
  out.posterior.assign(belief.begin(), belief.end());
  out.obs_probability = 1.0;
  out.expected_reward = env_->rescale_reward(0.0);
  const auto d = decode(belief, n);

  if (d.terminal) {
    // Absorbing: keeps every branch at full depth with a constant reward, so
    // the affine rescaling stays argmax-neutral across branches.
    if (obs != RockSampleEnv::kObsNone)
      throw ImpossibleObservation("terminal emits only the null observation");
    return out;
  }

  switch (action) {
    case RockSampleEnv::kActionNorth:
      out.posterior[0] = std::min(d.y + 1, n - 1) * n + d.x;
      break;
    case RockSampleEnv::kActionSouth:
      out.posterior[0] = std::max(d.y - 1, 0) * n + d.x;
      break;
    case RockSampleEnv::kActionEast:
      if (d.x == n - 1) {
        out.posterior[0] = n * n;
        out.expected_reward = env_->rescale_reward(10.0);
      } else {
        out.posterior[0] = d.y * n + d.x + 1;
      }
      break;
    case RockSampleEnv::kActionWest:
      out.posterior[0] = d.y * n + std::max(d.x - 1, 0);
      break;
    case RockSampleEnv::kActionSample: {
      const int rock = env_->rock_at(d.x, d.y);
      if (rock >= 0) {
        const double p = belief[1 + rock];
        out.expected_reward = env_->rescale_reward(p * 10.0 + (1.0 - p) * -10.0);
        out.posterior[1 + rock] = 0.0;  // sampled rocks are bad afterwards
      } else {
        out.expected_reward = env_->rescale_reward(-10.0);
      }
      break;
    }
    default: {
      const int rock = action - RockSampleEnv::kActionCheck;
      if (rock < 0 || rock >= env_->spec().k)
        throw InvalidAction("action " + std::to_string(action) + " out of range");
      const double acc = env_->check_accuracy(d.x, d.y, rock);
      const double p = belief[1 + rock];
      const double eta_good = p * acc + (1.0 - p) * (1.0 - acc);
      if (obs == RockSampleEnv::kObsGood) {
        if (eta_good <= 0.0) throw ImpossibleObservation("check cannot read good here");
        out.obs_probability = eta_good;
        out.posterior[1 + rock] = p * acc / eta_good;
      } else if (obs == RockSampleEnv::kObsBad) {
        const double eta_bad = 1.0 - eta_good;
        if (eta_bad <= 0.0) throw ImpossibleObservation("check cannot read bad here");
        out.obs_probability = eta_bad;
        out.posterior[1 + rock] = p * (1.0 - acc) / eta_bad;
      } else {
        throw ImpossibleObservation("check actions emit good/bad readings");
      }
      return out;
    }
  }
  if (obs != RockSampleEnv::kObsNone)
    throw ImpossibleObservation("this action emits only the null observation");
  return out;
}

SpaceProjection RockSampleBeliefSpace::project(std::span<const double> belief,
                                               double epsilon) const {
  const int k = env_->spec().k;
  SpaceProjection out;
  out.key.v.resize(1 + k);
  out.point.resize(1 + k);
  // The discrete coordinate passes through verbatim; cells never merge across
  // positions or across terminal/active status.
  out.key.v[0] = static_cast<std::int32_t>(belief[0]);
  out.point[0] = belief[0];
  for (int i = 0; i < k; ++i) {
    const auto idx = static_cast<std::int32_t>(std::floor(belief[1 + i] / epsilon + 0.5));
    out.key.v[1 + i] = idx;
    out.point[1 + i] = std::min(idx * epsilon, 1.0);
  }
  return out;
}

}  // namespace fmp
