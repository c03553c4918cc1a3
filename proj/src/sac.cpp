#include "ftattn/sac.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "ftattn/checkpoint.hpp"
#include "ftattn/config.hpp"
#include "ftattn/metrics.hpp"

namespace ftattn {

namespace {

constexpr std::uint64_t kTrainTag = 0x747261696eULL;
constexpr std::uint64_t kEvalTag = 0x6576616cULL;

std::uint64_t episode_seed(std::uint64_t run_seed, long episode, std::uint64_t tag) {
  return mix_seed(mix_seed(run_seed ^ tag) + static_cast<std::uint64_t>(episode));
}

}  // namespace

std::uint64_t eval_episode_seed(std::uint64_t run_seed, long episode) {
  return episode_seed(run_seed, episode, kEvalTag);
}

namespace {

std::vector<Vector> flatten(const std::vector<Observation>& obs) {
  std::vector<Vector> out;
  out.reserve(obs.size());
  for (const auto& o : obs) out.push_back(o.flat());
  return out;
}

}  // namespace

void TrainingConfig::validate() const {
  if (gamma <= 0.0 || gamma >= 1.0) throw ConfigError("gamma must lie in (0, 1)");
  if (alpha_temp < 0.0) throw ConfigError("alpha_temp must be non-negative");
  if (lr < 0.0) throw ConfigError("lr must be non-negative");
  if (episodes < 0) throw ConfigError("episodes must be non-negative");
  if (update_period < 1) throw ConfigError("update_period must be positive");
  if (batch < 1) throw ConfigError("batch must be positive");
  if (polyak <= 0.0 || polyak > 1.0) throw ConfigError("polyak must lie in (0, 1]");
  if (gradient_steps < 0) throw ConfigError("gradient_steps must be non-negative");
  if (buffer_capacity < batch) throw ConfigError("buffer_capacity must hold at least one batch");
  if (min_fill != 0 && min_fill < batch) throw ConfigError("min_fill must be >= batch");
  if (hidden < 1 || heads < 1 || hidden % heads != 0)
    throw ConfigError("heads must divide hidden");
  if (log_every < 0 || checkpoint_every < 0) throw ConfigError("cadences must be non-negative");
  if (hard_update_period < 1) throw ConfigError("hard_update_period must be positive");
}

void soft_update(const std::vector<ParamRef>& target, const std::vector<ParamRef>& live,
                 Real rate) {
  if (rate <= 0.0 || rate > 1.0) throw InputError("soft update rate must lie in (0, 1]");
  if (target.size() != live.size()) throw InputError("target/live parameter layouts differ");
  for (size_t g = 0; g < target.size(); ++g) {
    if (target[g].rows != live[g].rows || target[g].cols != live[g].cols)
      throw InputError("shape mismatch in soft update for " + target[g].name);
    Real* t = target[g].data;
    const Real* l = live[g].data;
    for (Index k = 0; k < target[g].size(); ++k) t[k] = (1.0 - rate) * t[k] + rate * l[k];
  }
}

Matrix critic_target(const std::vector<Matrix>& next_obs, const Matrix& rewards,
                     const Vector& done, const TargetParams& targets,
                     const TrainingConfig& cfg, Rng& rng) {
  const int n = static_cast<int>(next_obs.size());
  const Index b = rewards.rows();
  if (rewards.cols() != n || done.size() != b) throw InputError("target batch shape mismatch");

  std::vector<PolicyForward> pf;
  pf.reserve(n);
  for (int i = 0; i < n; ++i) pf.push_back(policy_forward(targets.policy, i, next_obs[i]));

  IntMatrix next_actions(b, n);
  for (int i = 0; i < n; ++i)
    for (Index r = 0; r < b; ++r)
      next_actions(r, i) = rng.categorical(pf[i].probs.row(r).transpose());

  CriticBatch next_batch{next_obs, next_actions};
  const std::vector<Matrix> rows = critic_rows(targets.critic, next_batch);

  Matrix y(b, n);
  for (int i = 0; i < n; ++i) {
    for (Index r = 0; r < b; ++r) {
      if (done[r] > 0.5) {
        y(r, i) = rewards(r, i);
      } else if (cfg.exact_target_expectation) {
        Real value = 0.0;
        for (Index a = 0; a < rows[i].cols(); ++a) {
          const Real p = pf[i].probs(r, a);
          if (p > 0.0) value += p * (rows[i](r, a) - cfg.alpha_temp * pf[i].logp(r, a));
        }
        y(r, i) = rewards(r, i) + cfg.gamma * value;
      } else {
        const int a = next_actions(r, i);
        y(r, i) = rewards(r, i) +
                  cfg.gamma * (rows[i](r, a) - cfg.alpha_temp * pf[i].logp(r, a));
      }
    }
  }
  return y;
}

Real counterfactual_baseline(const Vector& q_row, const Vector& probs) {
  if (q_row.size() != probs.size()) throw InputError("baseline row/distribution size mismatch");
  return probs.dot(q_row);
}

Matrix advantage_weights(const PolicyParams& policy, const AnyCritic& critic,
                         const std::vector<Matrix>& obs, const IntMatrix& actions,
                         Real alpha_temp) {
  const int n = policy.cfg.n_agents;
  const Index b = actions.rows();
  CriticBatch batch{obs, actions};
  const std::vector<Matrix> rows = critic_rows(critic, batch);

  Matrix w(b, n);
  for (int i = 0; i < n; ++i) {
    const PolicyForward pf = policy_forward(policy, i, obs[i]);
    for (Index r = 0; r < b; ++r) {
      const int a = actions(r, i);
      const Real baseline =
          counterfactual_baseline(rows[i].row(r).transpose(), pf.probs.row(r).transpose());
      w(r, i) = alpha_temp * pf.logp(r, a) - rows[i](r, a) + baseline;
    }
  }
  return w;
}

Real policy_surrogate(const PolicyParams& policy, const std::vector<Matrix>& obs,
                      const IntMatrix& actions, const Matrix& weights) {
  const int n = policy.cfg.n_agents;
  const Index b = actions.rows();
  Real loss = 0.0;
  for (int i = 0; i < n; ++i) {
    const PolicyForward pf = policy_forward(policy, i, obs[i]);
    for (Index r = 0; r < b; ++r)
      loss += pf.logp(r, actions(r, i)) * weights(r, i) / static_cast<Real>(b);
  }
  return loss;
}

PolicyLossGrads policy_gradient_with_actions(const PolicyParams& policy,
                                             const AnyCritic& critic,
                                             const std::vector<Matrix>& obs,
                                             const IntMatrix& actions, Real alpha_temp) {
  const int n = policy.cfg.n_agents;
  const int n_actions = policy.cfg.n_actions;
  const Index b = actions.rows();
  const Matrix w = advantage_weights(policy, critic, obs, actions, alpha_temp);

  PolicyLossGrads out{0.0, policy.zeros_like(), actions};
  for (int i = 0; i < n; ++i) {
    const PolicyForward pf = policy_forward(policy, i, obs[i]);
    Matrix d_logits(b, n_actions);
    for (Index r = 0; r < b; ++r) {
      const int a = actions(r, i);
      const Real scale = w(r, i) / static_cast<Real>(b);
      out.loss += pf.logp(r, a) * scale;
      d_logits.row(r) = -scale * pf.probs.row(r);
      d_logits(r, a) += scale;
    }
    policy_backward(policy, i, obs[i], pf, d_logits, out.grads);
  }
  if (!std::isfinite(out.loss)) throw NumericError("policy loss is not finite");
  return out;
}

PolicyLossGrads policy_gradient(const PolicyParams& policy, const AnyCritic& critic,
                                const std::vector<Matrix>& obs, const TrainingConfig& cfg,
                                Rng& rng) {
  const int n = policy.cfg.n_agents;
  const Index b = obs.empty() ? 0 : obs[0].rows();
  IntMatrix actions(b, n);
  for (int i = 0; i < n; ++i) {
    const PolicyForward pf = policy_forward(policy, i, obs[i]);
    for (Index r = 0; r < b; ++r)
      actions(r, i) = rng.categorical(pf.probs.row(r).transpose());
  }
  return policy_gradient_with_actions(policy, critic, obs, actions, cfg.alpha_temp);
}

EvalStats evaluate(const PolicyParams& policy, const EnvConfig& env_cfg, VariantKind variant,
                   long episodes, std::uint64_t seed) {
  if (episodes < 1) throw InputError("evaluation needs at least one episode");
  env_cfg.validate();

  std::vector<Real> totals;
  totals.reserve(episodes);
  for (long e = 0; e < episodes; ++e) {
    ResetResult rr = reset(env_cfg, eval_episode_seed(seed, e));
    WorldState state = std::move(rr.state);
    std::vector<Vector> obs = flatten(variant_view(variant, state, rr.observations));
    Real total = 0.0;
    for (int t = 0; t < env_cfg.episode_len; ++t) {
      std::vector<int> actions(env_cfg.n_agents);
      for (int i = 0; i < env_cfg.n_agents; ++i)
        actions[i] = greedy_action(policy, i, obs[i]);
      StepResult sr = step(state, actions, env_cfg);
      total += sr.reward;
      state = std::move(sr.state);
      obs = flatten(variant_view(variant, state, sr.observations));
    }
    totals.push_back(total);
  }

  EvalStats stats;
  stats.episodes = episodes;
  Real sum = 0.0;
  for (Real v : totals) sum += v;
  stats.mean = sum / static_cast<Real>(episodes);
  if (episodes > 1) {
    Real ss = 0.0;
    for (Real v : totals) ss += (v - stats.mean) * (v - stats.mean);
    stats.stddev = std::sqrt(ss / static_cast<Real>(episodes - 1));
  }
  return stats;
}

// --- Trainer -----------------------------------------------------------------

Trainer::Trainer(const EnvConfig& env_cfg, const TrainingConfig& train_cfg, VariantKind variant)
    : env_cfg_(env_cfg),
      cfg_(train_cfg),
      variant_(variant),
      critic_([&] {
        env_cfg.validate();
        train_cfg.validate();
        Rng rng = Rng::split(train_cfg.seed, 1);
        return make_critic(variant, env_cfg.n_agents, env_cfg.obs_dim(), kNumActions,
                           train_cfg.hidden, train_cfg.heads, rng);
      }()),
      policy_([&] {
        Rng rng = Rng::split(train_cfg.seed, 2);
        PolicyConfig pc{env_cfg.n_agents, env_cfg.obs_dim(), kNumActions, train_cfg.hidden};
        return PolicyParams::init(pc, rng);
      }()),
      target_{critic_, policy_},
      critic_opt_(critic_refs(critic_), train_cfg.lr),
      policy_opt_(policy_.param_refs(), train_cfg.lr),
      buffer_(train_cfg.buffer_capacity),
      action_rng_(Rng::split(train_cfg.seed, 3)),
      buffer_rng_(Rng::split(train_cfg.seed, 4)),
      target_rng_(Rng::split(train_cfg.seed, 5)),
      fresh_action_rng_(Rng::split(train_cfg.seed, 6)) {}

Trainer::UpdateStats Trainer::do_update() {
  const int n = env_cfg_.n_agents;
  const Index b = cfg_.batch;
  const int obs_dim = env_cfg_.obs_dim();

  const auto sampled = buffer_.sample(cfg_.batch, buffer_rng_);

  CriticBatch cur;
  cur.obs.assign(n, Matrix(b, obs_dim));
  cur.actions.resize(b, n);
  std::vector<Matrix> next_obs(n, Matrix(b, obs_dim));
  Matrix rewards(b, n);
  Vector done(b);
  for (Index r = 0; r < b; ++r) {
    const Transition& t = *sampled[r];
    for (int i = 0; i < n; ++i) {
      cur.obs[i].row(r) = t.obs[i].transpose();
      next_obs[i].row(r) = t.next_obs[i].transpose();
      cur.actions(r, i) = t.actions[i];
      rewards(r, i) = t.rewards[i];
    }
    done[r] = t.done ? 1.0 : 0.0;
  }

  const Matrix y = critic_target(next_obs, rewards, done, target_, cfg_, target_rng_);
  AnyLossGrads cl = critic_loss_grads(critic_, cur, y);
  critic_opt_.step(critic_refs(critic_), critic_refs(cl.grads));

  PolicyLossGrads pg = policy_gradient(policy_, critic_, cur.obs, cfg_, fresh_action_rng_);
  policy_opt_.step(policy_.param_refs(), pg.grads.param_refs());

  ++gradient_updates_;
  if (cfg_.hard_target_update) {
    if (gradient_updates_ % cfg_.hard_update_period == 0) {
      soft_update(critic_refs(target_.critic), critic_refs(critic_), 1.0);
      soft_update(target_.policy.param_refs(), policy_.param_refs(), 1.0);
    }
  } else {
    soft_update(critic_refs(target_.critic), critic_refs(critic_), cfg_.polyak);
    soft_update(target_.policy.param_refs(), policy_.param_refs(), cfg_.polyak);
  }
  return {cl.loss, pg.loss};
}

void Trainer::save_checkpoint(const std::string& path, long episode) {
  std::vector<ParamRef> refs = critic_refs(critic_);
  for (auto& r : policy_.param_refs()) refs.push_back(r);
  nlohmann::json meta = {
      {"variant", variant_name(variant_)}, {"n_agents", env_cfg_.n_agents},
      {"obs_dim", env_cfg_.obs_dim()},     {"n_actions", kNumActions},
      {"hidden", cfg_.hidden},             {"heads", cfg_.heads},
      {"episode", episode},
  };
  ftattn::save_checkpoint(path, refs, meta);
}

TrainSummary Trainer::run(const RunOptions& opts) {
  namespace fs = std::filesystem;
  const int n = env_cfg_.n_agents;
  TrainSummary summary;

  JsonlWriter metrics, timing;
  std::ofstream traj;
  if (!opts.out_dir.empty()) {
    fs::create_directories(opts.out_dir);
    ExperimentConfig snapshot;
    snapshot.env = env_cfg_;
    snapshot.train = cfg_;
    snapshot.variant = variant_;
    snapshot.out_dir = opts.out_dir;
    std::ofstream cfg_out(fs::path(opts.out_dir) / "resolved_config.txt");
    cfg_out << render_config(snapshot);
    metrics.open((fs::path(opts.out_dir) / "metrics.jsonl").string());
    timing.open((fs::path(opts.out_dir) / "timing.jsonl").string());
  }
  if (!opts.trajectory_path.empty()) {
    traj.open(opts.trajectory_path, std::ios::trunc);
    if (!traj) throw InputError("cannot open trajectory dump: " + opts.trajectory_path);
    traj << "# episode step";
    for (int i = 0; i < n; ++i) traj << " ax" << i << " ay" << i;
    for (int i = 0; i < n; ++i) traj << " lx" << i << " ly" << i;
    for (int i = 0; i < n; ++i) traj << " gifted" << i;
    for (int i = 0; i < n; ++i) traj << " action" << i;
    traj << " reward\n";
  }

  const long min_fill = cfg_.resolved_min_fill();
  const auto t_start = std::chrono::steady_clock::now();
  long steps_since_update = 0;
  Real last_critic_loss = 0.0, last_policy_loss = 0.0;
  bool have_losses = false;

  const CriticParams* attn = attention_params(critic_);

  try {
    for (long episode = 0; episode < cfg_.episodes; ++episode) {
      ResetResult rr = reset(env_cfg_, episode_seed(cfg_.seed, episode, kTrainTag));
      WorldState state = std::move(rr.state);
      std::vector<Vector> obs = flatten(variant_view(variant_, state, rr.observations));

      const bool log_attn =
          attn != nullptr && cfg_.log_every > 0 && episode % cfg_.log_every == 0;
      Matrix entropy_sum;
      if (log_attn) entropy_sum = Matrix::Zero(cfg_.heads, n);

      Real ep_reward = 0.0;
      for (int t = 0; t < env_cfg_.episode_len; ++t) {
        std::vector<int> actions(n);
        for (int i = 0; i < n; ++i)
          actions[i] = action_rng_.categorical(action_probs(policy_, i, obs[i]));

        StepResult sr = step(state, actions, env_cfg_);
        std::vector<Vector> next_obs = flatten(variant_view(variant_, sr.state, sr.observations));

        Transition tr;
        tr.obs = obs;
        tr.actions = Eigen::Map<const IntVector>(actions.data(), n);
        tr.rewards = Vector::Constant(n, sr.reward);
        tr.next_obs = next_obs;
        // episodes end by time-limit truncation, not by reaching a terminal
        // state, so the value bootstrap continues through the boundary
        tr.done = false;
        tr.gifted = state.gifted;
        buffer_.push(std::move(tr));

        if (log_attn) {
          std::vector<Vector> onehots;
          onehots.reserve(n);
          for (int i = 0; i < n; ++i) onehots.push_back(onehot(actions[i], kNumActions));
          entropy_sum += attention_entropy(critic_attention(*attn, obs, onehots));
        }
        if (traj.is_open()) {
          traj << episode << ' ' << t;
          for (int i = 0; i < n; ++i)
            traj << ' ' << format_real(sr.state.agent_pos(i, 0)) << ' '
                 << format_real(sr.state.agent_pos(i, 1));
          for (int i = 0; i < n; ++i)
            traj << ' ' << format_real(sr.state.landmark_pos(i, 0)) << ' '
                 << format_real(sr.state.landmark_pos(i, 1));
          for (int i = 0; i < n; ++i) traj << ' ' << (sr.state.gifted[i] ? 1 : 0);
          for (int i = 0; i < n; ++i) traj << ' ' << actions[i];
          traj << ' ' << format_real(sr.reward) << '\n';
        }

        ep_reward += sr.reward;
        state = std::move(sr.state);
        obs = std::move(next_obs);

        if (++steps_since_update >= cfg_.update_period) {
          steps_since_update = 0;
          if (buffer_.size() >= min_fill) {
            for (int g = 0; g < cfg_.gradient_steps; ++g) {
              const UpdateStats stats = do_update();
              last_critic_loss = stats.critic_loss;
              last_policy_loss = stats.policy_loss;
              have_losses = true;
            }
          }
        }
      }

      summary.episode_rewards.push_back(ep_reward);

      if (metrics.is_open()) {
        nlohmann::json rec = {
            {"episode", episode},
            {"mean_step_reward", ep_reward / static_cast<Real>(env_cfg_.episode_len)},
            {"critic_loss", have_losses ? nlohmann::json(last_critic_loss) : nlohmann::json()},
            {"policy_loss", have_losses ? nlohmann::json(last_policy_loss) : nlohmann::json()},
        };
        if (log_attn) {
          nlohmann::json ent = nlohmann::json::array();
          const Matrix mean_entropy = entropy_sum / static_cast<Real>(env_cfg_.episode_len);
          for (int h = 0; h < cfg_.heads; ++h) {
            nlohmann::json row = nlohmann::json::array();
            for (int i = 0; i < n; ++i) row.push_back(mean_entropy(h, i));
            ent.push_back(row);
          }
          rec["attention_entropy"] = ent;
        }
        metrics.write(rec);
        const auto elapsed = std::chrono::duration<Real>(
                                 std::chrono::steady_clock::now() - t_start)
                                 .count();
        timing.write({{"episode", episode}, {"wallclock", elapsed}});
      }
      if (!opts.out_dir.empty() && cfg_.checkpoint_every > 0 &&
          (episode + 1) % cfg_.checkpoint_every == 0 && episode + 1 < cfg_.episodes) {
        save_checkpoint((fs::path(opts.out_dir) / ("ckpt_" + std::to_string(episode + 1) + ".bin"))
                            .string(),
                        episode + 1);
      }
      if (opts.progress != nullptr && (episode + 1) % 500 == 0)
        (*opts.progress) << variant_name(variant_) << " episode " << (episode + 1) << "/"
                         << cfg_.episodes << " reward " << ep_reward << "\n";
    }
  } catch (const NumericError&) {
    summary.diverged = true;
    if (!opts.out_dir.empty()) {
      const std::string diag = (fs::path(opts.out_dir) / "ckpt_diagnostic.bin").string();
      save_checkpoint(diag, -1);
      summary.final_checkpoint = diag;
    }
    throw;
  }

  summary.gradient_updates = gradient_updates_;
  if (!opts.out_dir.empty()) {
    const std::string final_path =
        (fs::path(opts.out_dir) / ("ckpt_" + std::to_string(cfg_.episodes) + ".bin")).string();
    save_checkpoint(final_path, cfg_.episodes);
    summary.final_checkpoint = final_path;
  }
  return summary;
}

Trainer make_variant(VariantKind kind, const EnvConfig& env_cfg, const TrainingConfig& cfg) {
  return Trainer(env_cfg, cfg, kind);
}

}  // namespace ftattn
