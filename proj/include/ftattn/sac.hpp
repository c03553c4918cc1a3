#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ftattn/adam.hpp"
#include "ftattn/env.hpp"
#include "ftattn/policy.hpp"
#include "ftattn/replay_buffer.hpp"
#include "ftattn/rng.hpp"
#include "ftattn/variants.hpp"

namespace ftattn {

struct TrainingConfig {
  Real gamma = 0.99;
  Real alpha_temp = 0.01;
  Real lr = 0.001;
  long episodes = 5000;  // desk-scale default
  long update_period = 1024;
  long batch = 1024;
  Real polyak = 0.005;
  int gradient_steps = 4;
  std::uint64_t seed = 0;
  long buffer_capacity = 1000000;
  long min_fill = 0;  // 0 resolves to 10 * batch
  int hidden = 128;
  int heads = 4;
  long log_every = 10;         // attention-entropy cadence in episodes
  long checkpoint_every = 0;   // 0: final checkpoint only
  bool exact_target_expectation = false;  // enumerate own-action expectation in targets
  bool hard_target_update = false;
  long hard_update_period = 100;  // gradient steps between hard copies

  long resolved_min_fill() const { return min_fill > 0 ? min_fill : 10 * batch; }
  void validate() const;
};

/// Delayed copies of the live critic and policies.
struct TargetParams {
  AnyCritic critic;
  PolicyParams policy;
};

/// Elementwise target <- (1 - rate) * target + rate * live.
void soft_update(const std::vector<ParamRef>& target, const std::vector<ParamRef>& live,
                 Real rate);

/// Regression targets: y_i = r_i + gamma * (Q_i(o', a') - alpha * ln pi_i(a_i'|o_i')),
/// with a' drawn from the target policies and the bootstrap term dropped on
/// terminal transitions. When cfg.exact_target_expectation is set, agent i's
/// own-action term is enumerated under the target policy instead of sampled.
Matrix critic_target(const std::vector<Matrix>& next_obs, const Matrix& rewards,
                     const Vector& done, const TargetParams& targets,
                     const TrainingConfig& cfg, Rng& rng);

/// Exact expected value of the candidate-action row under the given
/// distribution; no sampling.
Real counterfactual_baseline(const Vector& q_row, const Vector& probs);

/// Per-sample, per-agent score weights alpha * ln pi(a_i|o_i) - Q_i + b_i,
/// evaluated with the critic held fixed.
Matrix advantage_weights(const PolicyParams& policy, const AnyCritic& critic,
                         const std::vector<Matrix>& obs, const IntMatrix& actions,
                         Real alpha_temp);

/// Batch-mean sum over agents of ln pi(a_i|o_i) * w_i with w frozen; the
/// quantity whose gradient is the score-function update.
Real policy_surrogate(const PolicyParams& policy, const std::vector<Matrix>& obs,
                      const IntMatrix& actions, const Matrix& weights);

struct PolicyLossGrads {
  Real loss = 0.0;
  PolicyParams grads;
  IntMatrix actions;
};

PolicyLossGrads policy_gradient_with_actions(const PolicyParams& policy,
                                             const AnyCritic& critic,
                                             const std::vector<Matrix>& obs,
                                             const IntMatrix& actions, Real alpha_temp);

/// Samples fresh joint actions from the live policies, then forms the
/// score-function gradient with the counterfactual baseline subtracted.
PolicyLossGrads policy_gradient(const PolicyParams& policy, const AnyCritic& critic,
                                const std::vector<Matrix>& obs, const TrainingConfig& cfg,
                                Rng& rng);

struct EvalStats {
  Real mean = 0.0;
  Real stddev = 0.0;
  long episodes = 0;
};

/// Environment seed used for the e-th evaluation episode; exposed so the
/// evaluation stream can be reproduced outside the evaluator.
std::uint64_t eval_episode_seed(std::uint64_t run_seed, long episode);

/// Greedy rollouts, no exploration, no learning. Returns mean and sample
/// standard deviation of the total episode reward.
EvalStats evaluate(const PolicyParams& policy, const EnvConfig& env_cfg, VariantKind variant,
                   long episodes, std::uint64_t seed);

struct RunOptions {
  std::string out_dir;          // empty: keep everything in memory
  std::string trajectory_path;  // empty: no trajectory dump
  std::ostream* progress = nullptr;
};

struct TrainSummary {
  std::vector<Real> episode_rewards;  // total reward per episode
  long gradient_updates = 0;
  bool diverged = false;
  std::string final_checkpoint;
};

/// Sequential rollout/update loop shared by all variants. Deterministic
/// given (env config, training config, variant): every random draw flows
/// through streams derived from the run seed.
class Trainer {
 public:
  Trainer(const EnvConfig& env_cfg, const TrainingConfig& train_cfg, VariantKind variant);

  TrainSummary run(const RunOptions& opts = {});

  const PolicyParams& policy() const { return policy_; }
  const AnyCritic& critic() const { return critic_; }
  AnyCritic& critic() { return critic_; }
  const TargetParams& target() const { return target_; }
  VariantKind variant() const { return variant_; }
  long gradient_updates() const { return gradient_updates_; }

  void save_checkpoint(const std::string& path, long episode);

 private:
  struct UpdateStats {
    Real critic_loss = 0.0;
    Real policy_loss = 0.0;
  };
  UpdateStats do_update();

  EnvConfig env_cfg_;
  TrainingConfig cfg_;
  VariantKind variant_;
  AnyCritic critic_;
  PolicyParams policy_;
  TargetParams target_;
  Adam critic_opt_;
  Adam policy_opt_;
  ReplayBuffer buffer_;
  Rng action_rng_, buffer_rng_, target_rng_, fresh_action_rng_;
  long gradient_updates_ = 0;
};

/// Builds the trainer for a comparison variant.
Trainer make_variant(VariantKind kind, const EnvConfig& env_cfg, const TrainingConfig& cfg);

}  // namespace ftattn
