#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "ftattn/checkpoint.hpp"
#include "ftattn/config.hpp"
#include "ftattn/metrics.hpp"
#include "ftattn/sac.hpp"

namespace fs = std::filesystem;
using namespace ftattn;

namespace {

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> variant;
  std::optional<long> episodes;
  std::optional<std::string> out;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool episodes_is_config_key) {
  cmd->add_option("--config", flags.config_path, "key=value configuration file")->required();
  cmd->add_option("--seed", flags.seed, "override the run seed");
  cmd->add_option("--variant", flags.variant,
                  "learner variant: ftattn|independent|oracle-comm|shared-all");
  if (episodes_is_config_key)
    cmd->add_option("--episodes", flags.episodes, "override the training episode count");
  cmd->add_option("--out", flags.out, "output directory");
}

ExperimentConfig resolve_config(const CommonFlags& flags) {
  ExperimentConfig cfg = load_config_file(flags.config_path);
  apply_env_overrides(cfg);
  if (flags.seed) apply_override(cfg, "seed", std::to_string(*flags.seed));
  if (flags.variant) apply_override(cfg, "variant", *flags.variant);
  if (flags.episodes) apply_override(cfg, "episodes", std::to_string(*flags.episodes));
  if (flags.out) apply_override(cfg, "out_dir", *flags.out);
  cfg.validate();
  return cfg;
}

struct LoadedModel {
  AnyCritic critic;
  PolicyParams policy;
  nlohmann::json meta;
};

LoadedModel load_model(const std::string& checkpoint_path, const ExperimentConfig& cfg) {
  Rng dummy(0);
  LoadedModel m{make_critic(cfg.variant, cfg.env.n_agents, cfg.env.obs_dim(), kNumActions,
                            cfg.train.hidden, cfg.train.heads, dummy),
                PolicyParams::zeros(
                    {cfg.env.n_agents, cfg.env.obs_dim(), kNumActions, cfg.train.hidden}),
                {}};
  std::vector<ParamRef> refs = critic_refs(m.critic);
  for (auto& r : m.policy.param_refs()) refs.push_back(r);
  m.meta = load_checkpoint(checkpoint_path, refs);
  const std::string ckpt_variant = m.meta.value("variant", std::string());
  if (!ckpt_variant.empty() && ckpt_variant != variant_name(cfg.variant))
    throw InputError("checkpoint was trained with variant '" + ckpt_variant +
                     "' but the configuration selects '" + variant_name(cfg.variant) + "'");
  return m;
}

int cmd_train(const CommonFlags& flags, const std::string& trajectory_path, bool quiet) {
  ExperimentConfig cfg = resolve_config(flags);
  Trainer trainer = make_variant(cfg.variant, cfg.env, cfg.train);
  RunOptions opts;
  opts.out_dir = cfg.out_dir;
  opts.trajectory_path = trajectory_path;
  if (!quiet) opts.progress = &std::cerr;
  const TrainSummary summary = trainer.run(opts);

  Real tail = 0.0;
  const long tail_n = std::min<long>(100, summary.episode_rewards.size());
  for (long e = summary.episode_rewards.size() - tail_n;
       e < static_cast<long>(summary.episode_rewards.size()); ++e)
    tail += summary.episode_rewards[e];
  std::cout << "trained " << cfg.train.episodes << " episodes (" << summary.gradient_updates
            << " gradient updates); last-" << tail_n << " mean episode reward "
            << (tail_n > 0 ? tail / tail_n : 0.0) << "\n";
  std::cout << "outputs in " << cfg.out_dir << "\n";
  return 0;
}

int cmd_eval(const CommonFlags& flags, const std::string& checkpoint_path, long episodes) {
  ExperimentConfig cfg = resolve_config(flags);
  const LoadedModel model = load_model(checkpoint_path, cfg);
  const EvalStats stats = evaluate(model.policy, cfg.env, cfg.variant, episodes,
                                   cfg.train.seed);

  const nlohmann::json record = {{"mean", stats.mean},
                                 {"std", stats.stddev},
                                 {"episodes", stats.episodes},
                                 {"variant", variant_name(cfg.variant)},
                                 {"seed", cfg.train.seed}};
  std::cout << "episode reward: " << stats.mean << " +/- " << stats.stddev << " over "
            << stats.episodes << " episodes\n";
  std::cout << record.dump() << "\n";
  if (flags.out) {
    fs::create_directories(*flags.out);
    std::ofstream out(fs::path(*flags.out) / "eval.json");
    out << record.dump() << "\n";
  }
  return 0;
}

int cmd_attention_report(const CommonFlags& flags, const std::string& checkpoint_path,
                         long episodes, std::string metrics_path) {
  ExperimentConfig cfg = resolve_config(flags);
  const LoadedModel model = load_model(checkpoint_path, cfg);
  const CriticParams* critic = attention_params(model.critic);
  if (critic == nullptr)
    throw InputError("attention report requires an attention variant; '" +
                     variant_name(cfg.variant) + "' has no attention weights");
  if (episodes < 1) throw InputError("attention report needs at least one episode");

  const std::string out_dir = flags.out
                                  ? *flags.out
                                  : (fs::path(checkpoint_path).parent_path() / "attention_report")
                                        .string();
  fs::create_directories(out_dir);

  const int n = cfg.env.n_agents;
  const int heads = cfg.train.heads;
  std::vector<Matrix> mean_attn(heads, Matrix::Zero(n, n));
  Matrix mean_entropy = Matrix::Zero(heads, n);
  long samples = 0;

  for (long e = 0; e < episodes; ++e) {
    ResetResult rr = reset(cfg.env, mix_seed(mix_seed(cfg.train.seed ^ 0x726570ULL) + e));
    WorldState state = std::move(rr.state);
    std::vector<Observation> view = variant_view(cfg.variant, state, rr.observations);
    for (int t = 0; t < cfg.env.episode_len; ++t) {
      std::vector<Vector> obs;
      std::vector<Vector> acts;
      std::vector<int> actions(n);
      for (int i = 0; i < n; ++i) obs.push_back(view[i].flat());
      for (int i = 0; i < n; ++i) actions[i] = greedy_action(model.policy, i, obs[i]);
      for (int i = 0; i < n; ++i) acts.push_back(onehot(actions[i], kNumActions));

      const AttentionTensor attn = critic_attention(*critic, obs, acts);
      for (int h = 0; h < heads; ++h) mean_attn[h] += attn.alpha[h];
      mean_entropy += attention_entropy(attn);
      ++samples;

      StepResult sr = step(state, actions, cfg.env);
      state = std::move(sr.state);
      view = variant_view(cfg.variant, state, sr.observations);
    }
  }
  for (auto& m : mean_attn) m /= static_cast<Real>(samples);
  mean_entropy /= static_cast<Real>(samples);

  for (int h = 0; h < heads; ++h) {
    std::ofstream out(fs::path(out_dir) / ("attention_head" + std::to_string(h) + ".txt"));
    out << "# mean attention, head " << h << "; row i = attending agent, col j = attended agent\n";
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) out << (j ? " " : "") << format_real(mean_attn[h](i, j));
      out << "\n";
    }
  }

  // Per-agent matrix composed from each agent's most-used head (lowest
  // mean entropy = most focused).
  {
    std::ofstream out(fs::path(out_dir) / "attention_selected.txt");
    out << "# per-agent rows from the agent's lowest-entropy head; third column group"
           " lists the chosen head\n";
    for (int i = 0; i < n; ++i) {
      int best_head = 0;
      for (int h = 1; h < heads; ++h)
        if (mean_entropy(h, i) < mean_entropy(best_head, i)) best_head = h;
      for (int j = 0; j < n; ++j) out << format_real(mean_attn[best_head](i, j)) << " ";
      out << best_head << "\n";
    }
  }

  if (metrics_path.empty())
    metrics_path = (fs::path(checkpoint_path).parent_path() / "metrics.jsonl").string();
  if (fs::exists(metrics_path)) {
    std::ofstream out(fs::path(out_dir) / "entropy_timeline.txt");
    out << "# episode";
    for (int h = 0; h < heads; ++h)
      for (int i = 0; i < n; ++i) out << " h" << h << "_a" << i;
    out << "\n";
    for (const auto& rec : read_jsonl(metrics_path)) {
      if (!rec.contains("attention_entropy")) continue;
      out << rec.at("episode").get<long>();
      for (const auto& row : rec.at("attention_entropy"))
        for (const auto& v : row) out << " " << format_real(v.get<Real>());
      out << "\n";
    }
  } else {
    std::cerr << "note: no metrics stream at " << metrics_path
              << "; entropy timeline skipped\n";
  }

  std::cout << "attention report written to " << out_dir << " (" << samples << " steps)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"FT-Attn: fault-tolerant attention critics on noisy Cooperative Navigation"};
  app.require_subcommand(1);

  CommonFlags train_flags, eval_flags, report_flags;
  std::string trajectory_path;
  bool quiet = false;
  std::string eval_checkpoint, report_checkpoint, report_metrics;
  long eval_episodes = 1000;
  long report_episodes = 10;

  CLI::App* train = app.add_subcommand("train", "train a variant and write metrics/checkpoints");
  add_common(train, train_flags, true);
  train->add_option("--dump-trajectories", trajectory_path,
                    "write per-step world records to this file");
  train->add_flag("--quiet", quiet, "suppress progress lines");

  CLI::App* eval = app.add_subcommand("eval", "greedy evaluation of a checkpoint");
  add_common(eval, eval_flags, false);
  eval->add_option("--checkpoint", eval_checkpoint, "checkpoint to evaluate")->required();
  eval->add_option("--episodes", eval_episodes, "evaluation episodes (default 1000)");

  CLI::App* report = app.add_subcommand(
      "attention-report", "emit mean attention grids and the entropy timeline");
  add_common(report, report_flags, false);
  report->add_option("--checkpoint", report_checkpoint, "checkpoint to inspect")->required();
  report->add_option("--episodes", report_episodes, "rollout episodes (default 10)");
  report->add_option("--metrics", report_metrics,
                     "metrics stream (default: metrics.jsonl next to the checkpoint)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) return cmd_train(train_flags, trajectory_path, quiet);
    if (eval->parsed()) return cmd_eval(eval_flags, eval_checkpoint, eval_episodes);
    if (report->parsed())
      return cmd_attention_report(report_flags, report_checkpoint, report_episodes,
                                  report_metrics);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NotReadyError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
