#pragma once

#include <cstdint>
#include <vector>

#include "ftattn/rng.hpp"
#include "ftattn/types.hpp"

namespace ftattn {

enum class ScenarioMode { Fixed, Alternating, Dynamic };
enum class NoiseResample { PerStep, PerEpisode };

/// Discrete action indices for each agent.
enum Action : int { kNoOp = 0, kRight = 1, kLeft = 2, kUp = 3, kDown = 4 };
constexpr int kNumActions = 5;

struct EnvConfig {
  int n_agents = 3;
  ScenarioMode mode = ScenarioMode::Fixed;
  std::vector<int> gifted_set = {0};  // Fixed mode only
  Real arena_half_width = 1.0;
  Real dt = 0.1;
  Real damping = 0.25;
  Real force_mag = 1.0;
  int episode_len = 25;
  NoiseResample noise_resample = NoiseResample::PerStep;

  int obs_dim() const { return 4 + 2 * n_agents; }
  void validate() const;  // throws ConfigError
};

/// Ground-truth world. Corrupted landmark views are drawn into the state
/// when it advances, so observation is a pure read.
struct WorldState {
  Matrix agent_pos;       // N x 2
  Matrix agent_vel;       // N x 2
  Matrix landmark_pos;    // N x 2
  BoolVec gifted;         // N
  int step_index = 0;
  int alternating_gifted = 0;  // episode's draw, Alternating mode
  Matrix corrupted_view;  // N x 2N, per-agent fake landmark coordinates
  Rng dynamics_rng{0};
  Rng corruption_rng{0};
};

/// Per-agent view. Flattened layout: own_pos(2), own_vel(2),
/// then landmark_view row-major (x0, y0, x1, y1, ...).
struct Observation {
  Vec2 own_pos;
  Vec2 own_vel;
  Matrix landmark_view;  // N x 2

  Vector flat() const {
    const Index n = landmark_view.rows();
    Vector v(4 + 2 * n);
    v[0] = own_pos[0];
    v[1] = own_pos[1];
    v[2] = own_vel[0];
    v[3] = own_vel[1];
    for (Index l = 0; l < n; ++l) {
      v[4 + 2 * l] = landmark_view(l, 0);
      v[5 + 2 * l] = landmark_view(l, 1);
    }
    return v;
  }
};

struct ResetResult {
  WorldState state;
  std::vector<Observation> observations;
};

struct StepResult {
  WorldState state;
  std::vector<Observation> observations;
  Real reward = 0.0;
  bool done = false;
};

/// Samples a fresh world. Identical (config, seed) pairs produce
/// bit-identical states.
ResetResult reset(const EnvConfig& config, std::uint64_t seed);

/// Advances one step. The shared reward is the negative sum over landmarks
/// of the distance to the nearest agent, evaluated on the new positions.
StepResult step(const WorldState& state, const std::vector<int>& action, const EnvConfig& config);

/// Reads agent's view of the world from the current state.
Observation observe(const WorldState& state, int agent, const EnvConfig& config);

/// Mask of agents whose landmark view is ground truth, per the mode's rule.
BoolVec gifted_mask(const WorldState& state, const EnvConfig& config);

/// Sum over landmarks of the distance to the nearest agent (reward = -cost).
Real coverage_cost(const Matrix& agent_pos, const Matrix& landmark_pos);

std::vector<Observation> observe_all(const WorldState& state, const EnvConfig& config);

}  // namespace ftattn
