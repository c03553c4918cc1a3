#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ftattn/sac.hpp"
#include "ftattn/variants.hpp"

using namespace ftattn;
namespace fs = std::filesystem;

namespace {

EnvConfig small_env(ScenarioMode mode = ScenarioMode::Fixed) {
  EnvConfig cfg;
  cfg.n_agents = 3;
  cfg.mode = mode;
  cfg.gifted_set = mode == ScenarioMode::Fixed ? std::vector<int>{0} : std::vector<int>{};
  cfg.episode_len = 10;
  return cfg;
}

TrainingConfig small_train(std::uint64_t seed) {
  TrainingConfig cfg;
  cfg.episodes = 4;
  cfg.update_period = 15;
  cfg.batch = 8;
  cfg.min_fill = 8;
  cfg.gradient_steps = 1;
  cfg.hidden = 16;
  cfg.heads = 2;
  cfg.buffer_capacity = 512;
  cfg.seed = seed;
  return cfg;
}

// per-episode landmark block of the first step line in a trajectory dump
std::vector<std::string> episode_landmark_fields(const fs::path& dump, int n) {
  std::ifstream in(dump);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::vector<std::string> fields;
    std::string f;
    while (ss >> f) fields.push_back(f);
    if (fields[1] != "0") continue;  // only the first step of each episode
    std::string block;
    for (int k = 0; k < 2 * n; ++k) block += fields[2 + 2 * n + k] + " ";
    out.push_back(block);
  }
  return out;
}

}  // namespace

TEST_CASE("variant names round-trip and bad names are rejected") {
  for (auto kind : {VariantKind::FTAttn, VariantKind::Independent, VariantKind::OracleComm,
                    VariantKind::SharedAll})
    CHECK(parse_variant(variant_name(kind)) == kind);
  CHECK_THROWS_AS(parse_variant("maddpg"), ConfigError);
}

TEST_CASE("make_critic wires the right architecture per variant") {
  Rng rng(50);
  auto ft = make_critic(VariantKind::FTAttn, 3, 10, 5, 16, 2, rng);
  auto ind = make_critic(VariantKind::Independent, 3, 10, 5, 16, 2, rng);
  auto oc = make_critic(VariantKind::OracleComm, 3, 10, 5, 16, 2, rng);
  auto sa = make_critic(VariantKind::SharedAll, 3, 10, 5, 16, 2, rng);

  CHECK(has_attention(ft));
  CHECK(has_attention(oc));
  CHECK_FALSE(has_attention(ind));
  CHECK_FALSE(has_attention(sa));
  CHECK(attention_params(sa) == nullptr);

  const auto& concat = std::get<ConcatCriticParams>(sa);
  CHECK(concat.cfg.input_dim() == 3 * 10 + 3 * 5);
  CHECK(concat.encoder[0].l1.in_dim() == 45);
}

TEST_CASE("OracleComm view replaces every landmark view with ground truth") {
  auto cfg = small_env(ScenarioMode::Alternating);
  Rng rng(51);
  WorldState s = reset(cfg, 4).state;
  for (int t = 0; t < cfg.episode_len; ++t) {
    std::vector<int> actions(3);
    for (auto& a : actions) a = rng.uniform_int(kNumActions);
    auto sr = step(s, actions, cfg);
    auto view = variant_view(VariantKind::OracleComm, sr.state, sr.observations);
    for (const auto& o : view) CHECK(o.landmark_view == sr.state.landmark_pos);
    // the raw view still carries corruption for non-gifted agents
    bool any_corrupted = false;
    for (int i = 0; i < 3; ++i)
      if (!sr.state.gifted[i] && sr.observations[i].landmark_view != sr.state.landmark_pos)
        any_corrupted = true;
    CHECK(any_corrupted);
    s = sr.state;
  }
}

TEST_CASE("Independent critic ignores other agents' observations") {
  Rng rng(52);
  auto critic = make_critic(VariantKind::Independent, 3, 10, 5, 16, 2, rng);

  CriticBatch batch;
  batch.obs.assign(3, Matrix(4, 10));
  batch.actions.resize(4, 3);
  for (int i = 0; i < 3; ++i)
    for (Index r = 0; r < 4; ++r) {
      for (Index c = 0; c < 10; ++c) batch.obs[i](r, c) = rng.uniform(-1.0, 1.0);
      batch.actions(r, i) = rng.uniform_int(5);
    }
  const auto rows = critic_rows(critic, batch);

  for (Index r = 0; r < 4; ++r)
    for (Index c = 0; c < 10; ++c) batch.obs[1](r, c) = rng.uniform(-1.0, 1.0);
  batch.actions.col(1).setConstant(3);
  const auto rows_again = critic_rows(critic, batch);

  CHECK(rows[0] == rows_again[0]);
  CHECK(rows[2] == rows_again[2]);
  CHECK(rows[1] != rows_again[1]);
}

TEST_CASE("SharedAll critic reacts to every agent's observation") {
  Rng rng(53);
  auto critic = make_critic(VariantKind::SharedAll, 3, 10, 5, 16, 2, rng);
  CriticBatch batch;
  batch.obs.assign(3, Matrix(2, 10));
  batch.actions = IntMatrix::Zero(2, 3);
  for (int i = 0; i < 3; ++i)
    for (Index r = 0; r < 2; ++r)
      for (Index c = 0; c < 10; ++c) batch.obs[i](r, c) = rng.uniform(-1.0, 1.0);
  const auto rows = critic_rows(critic, batch);
  batch.obs[2](0, 0) += 0.5;
  const auto rows_again = critic_rows(critic, batch);
  CHECK(rows[0] != rows_again[0]);
}

TEST_CASE("all variants consume the identical environment stream for a given seed") {
  const fs::path root("tmp_variant_streams");
  fs::remove_all(root);
  fs::create_directories(root);
  auto env = small_env();

  std::vector<std::vector<std::string>> landmark_blocks;
  for (auto kind : {VariantKind::FTAttn, VariantKind::Independent, VariantKind::OracleComm,
                    VariantKind::SharedAll}) {
    Trainer trainer = make_variant(kind, env, small_train(11));
    RunOptions opts;
    opts.trajectory_path = (root / (variant_name(kind) + ".txt")).string();
    trainer.run(opts);
    landmark_blocks.push_back(
        episode_landmark_fields(root / (variant_name(kind) + ".txt"), env.n_agents));
    REQUIRE(landmark_blocks.back().size() == 4);
  }
  for (size_t v = 1; v < landmark_blocks.size(); ++v) CHECK(landmark_blocks[v] == landmark_blocks[0]);
  fs::remove_all(root);
}

TEST_CASE("paired rewards: OracleComm and FTAttn face the same initial conditions") {
  auto env = small_env();
  // the evaluation stream is variant-independent by construction
  for (long e = 0; e < 5; ++e) {
    auto a = reset(env, eval_episode_seed(17, e));
    auto b = reset(env, eval_episode_seed(17, e));
    CHECK(a.state.agent_pos == b.state.agent_pos);
    CHECK(a.state.landmark_pos == b.state.landmark_pos);
  }
}
