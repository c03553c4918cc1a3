#include "ftattn/env.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace ftattn {

void EnvConfig::validate() const {
  if (n_agents < 2) throw ConfigError("n_agents must be >= 2");
  if (episode_len < 1) throw ConfigError("episode_len must be >= 1");
  if (damping < 0.0 || damping >= 1.0) throw ConfigError("damping must lie in [0, 1)");
  if (dt <= 0.0) throw ConfigError("dt must be positive");
  if (arena_half_width <= 0.0) throw ConfigError("arena_half_width must be positive");
  if (force_mag < 0.0) throw ConfigError("force_mag must be non-negative");
  if (mode == ScenarioMode::Fixed) {
    if (gifted_set.empty()) throw ConfigError("Fixed mode requires a non-empty gifted_set");
    std::set<int> seen;
    for (int g : gifted_set) {
      if (g < 0 || g >= n_agents) throw ConfigError("gifted_set index out of range");
      if (!seen.insert(g).second) throw ConfigError("gifted_set contains duplicates");
    }
  } else if (!gifted_set.empty() && gifted_set != std::vector<int>{0}) {
    throw ConfigError("gifted_set is only meaningful in Fixed mode");
  }
}

namespace {

int closest_to_origin(const Matrix& pos) {
  int best = 0;
  Real best_sq = pos.row(0).squaredNorm();
  for (Index i = 1; i < pos.rows(); ++i) {
    const Real d = pos.row(i).squaredNorm();
    if (d < best_sq) {  // ties keep the lowest index
      best_sq = d;
      best = static_cast<int>(i);
    }
  }
  return best;
}

BoolVec mask_for(const EnvConfig& config, const Matrix& agent_pos, int alternating_gifted) {
  BoolVec mask = BoolVec::Constant(config.n_agents, false);
  switch (config.mode) {
    case ScenarioMode::Fixed:
      for (int g : config.gifted_set) mask[g] = true;
      break;
    case ScenarioMode::Alternating:
      mask[alternating_gifted] = true;
      break;
    case ScenarioMode::Dynamic:
      mask[closest_to_origin(agent_pos)] = true;
      break;
  }
  return mask;
}

Matrix draw_uniform_points(Rng& rng, Index rows, Index cols, Real half_width) {
  Matrix m(rows, cols);
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) m(r, c) = rng.uniform(-half_width, half_width);
  return m;
}

}  // namespace

Real coverage_cost(const Matrix& agent_pos, const Matrix& landmark_pos) {
  Real cost = 0.0;
  for (Index l = 0; l < landmark_pos.rows(); ++l) {
    Real best = std::numeric_limits<Real>::infinity();
    for (Index i = 0; i < agent_pos.rows(); ++i)
      best = std::min(best, (landmark_pos.row(l) - agent_pos.row(i)).norm());
    cost += best;
  }
  return cost;
}

BoolVec gifted_mask(const WorldState& state, const EnvConfig& config) {
  return mask_for(config, state.agent_pos, state.alternating_gifted);
}

Observation observe(const WorldState& state, int agent, const EnvConfig& config) {
  const int n = config.n_agents;
  if (agent < 0 || agent >= n) throw InputError("agent index out of range");
  Observation obs;
  obs.own_pos = state.agent_pos.row(agent).transpose();
  obs.own_vel = state.agent_vel.row(agent).transpose();
  if (state.gifted[agent]) {
    obs.landmark_view = state.landmark_pos;
  } else {
    obs.landmark_view.resize(n, 2);
    for (int l = 0; l < n; ++l) {
      obs.landmark_view(l, 0) = state.corrupted_view(agent, 2 * l);
      obs.landmark_view(l, 1) = state.corrupted_view(agent, 2 * l + 1);
    }
  }
  return obs;
}

std::vector<Observation> observe_all(const WorldState& state, const EnvConfig& config) {
  std::vector<Observation> out;
  out.reserve(config.n_agents);
  for (int i = 0; i < config.n_agents; ++i) out.push_back(observe(state, i, config));
  return out;
}

ResetResult reset(const EnvConfig& config, std::uint64_t seed) {
  config.validate();
  const int n = config.n_agents;

  WorldState s;
  s.dynamics_rng = Rng::split(seed, 0x0d);
  s.corruption_rng = Rng::split(seed, 0x0c);
  s.agent_pos = draw_uniform_points(s.dynamics_rng, n, 2, config.arena_half_width);
  s.landmark_pos = draw_uniform_points(s.dynamics_rng, n, 2, config.arena_half_width);
  s.agent_vel = Matrix::Zero(n, 2);
  s.step_index = 0;
  s.alternating_gifted =
      config.mode == ScenarioMode::Alternating ? s.dynamics_rng.uniform_int(n) : 0;
  s.gifted = mask_for(config, s.agent_pos, s.alternating_gifted);
  // Corruption rows are drawn for every agent each time so the stream's
  // consumption never depends on who is gifted.
  s.corrupted_view = draw_uniform_points(s.corruption_rng, n, 2 * n, config.arena_half_width);

  ResetResult out{std::move(s), {}};
  out.observations = observe_all(out.state, config);
  return out;
}

StepResult step(const WorldState& state, const std::vector<int>& action,
                const EnvConfig& config) {
  const int n = config.n_agents;
  if (static_cast<int>(action.size()) != n) throw InputError("joint action has wrong length");
  for (int a : action)
    if (a < 0 || a >= kNumActions) throw InputError("action index out of range");
  if (state.step_index >= config.episode_len) throw InputError("episode already finished");

  static const Real fx[kNumActions] = {0.0, 1.0, -1.0, 0.0, 0.0};
  static const Real fy[kNumActions] = {0.0, 0.0, 0.0, 1.0, -1.0};

  StepResult out;
  out.state = state;
  WorldState& s = out.state;

  const Real w = config.arena_half_width;
  for (int i = 0; i < n; ++i) {
    s.agent_vel(i, 0) = s.agent_vel(i, 0) * (1.0 - config.damping) +
                        fx[action[i]] * config.force_mag * config.dt;
    s.agent_vel(i, 1) = s.agent_vel(i, 1) * (1.0 - config.damping) +
                        fy[action[i]] * config.force_mag * config.dt;
    s.agent_pos(i, 0) = std::clamp(s.agent_pos(i, 0) + s.agent_vel(i, 0) * config.dt, -w, w);
    s.agent_pos(i, 1) = std::clamp(s.agent_pos(i, 1) + s.agent_vel(i, 1) * config.dt, -w, w);
  }

  s.step_index = state.step_index + 1;
  if (config.mode == ScenarioMode::Dynamic) s.gifted = mask_for(config, s.agent_pos, 0);
  if (config.noise_resample == NoiseResample::PerStep)
    s.corrupted_view = draw_uniform_points(s.corruption_rng, n, 2 * n, w);

  out.reward = -coverage_cost(s.agent_pos, s.landmark_pos);
  out.done = s.step_index == config.episode_len;
  out.observations = observe_all(s, config);
  return out;
}

}  // namespace ftattn
