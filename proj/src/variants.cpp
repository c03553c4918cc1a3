#include "ftattn/variants.hpp"

namespace ftattn {

std::string variant_name(VariantKind kind) {
  switch (kind) {
    case VariantKind::FTAttn: return "ftattn";
    case VariantKind::Independent: return "independent";
    case VariantKind::OracleComm: return "oracle-comm";
    case VariantKind::SharedAll: return "shared-all";
  }
  throw ConfigError("unknown variant kind");
}

VariantKind parse_variant(const std::string& name) {
  if (name == "ftattn") return VariantKind::FTAttn;
  if (name == "independent") return VariantKind::Independent;
  if (name == "oracle-comm") return VariantKind::OracleComm;
  if (name == "shared-all") return VariantKind::SharedAll;
  throw ConfigError("unknown variant '" + name +
                    "' (expected ftattn|independent|oracle-comm|shared-all)");
}

AnyCritic make_critic(VariantKind kind, int n_agents, int obs_dim, int n_actions, int hidden,
                      int heads, Rng& rng) {
  switch (kind) {
    case VariantKind::FTAttn:
    case VariantKind::OracleComm: {
      CriticConfig cfg{n_agents, obs_dim, n_actions, hidden, heads, true};
      return CriticParams::init(cfg, rng);
    }
    case VariantKind::Independent: {
      CriticConfig cfg{n_agents, obs_dim, n_actions, hidden, heads, false};
      return CriticParams::init(cfg, rng);
    }
    case VariantKind::SharedAll: {
      ConcatCriticConfig cfg{n_agents, obs_dim, n_actions, hidden};
      return ConcatCriticParams::init(cfg, rng);
    }
  }
  throw ConfigError("unknown variant kind");
}

std::vector<ParamRef> critic_refs(AnyCritic& critic) {
  return std::visit([](auto& c) { return c.param_refs(); }, critic);
}

std::vector<Matrix> critic_rows(const AnyCritic& critic, const CriticBatch& batch) {
  if (const auto* attn = std::get_if<CriticParams>(&critic))
    return critic_forward(*attn, batch).rows;
  return concat_forward(std::get<ConcatCriticParams>(critic), batch).rows;
}

AnyLossGrads critic_loss_grads(const AnyCritic& critic, const CriticBatch& batch,
                               const Matrix& targets) {
  if (const auto* attn = std::get_if<CriticParams>(&critic)) {
    auto lg = critic_gradients(*attn, batch, targets);
    return {lg.loss, AnyCritic(std::move(lg.grads))};
  }
  auto lg = concat_gradients(std::get<ConcatCriticParams>(critic), batch, targets);
  return {lg.loss, AnyCritic(std::move(lg.grads))};
}

bool has_attention(const AnyCritic& critic) {
  const auto* attn = std::get_if<CriticParams>(&critic);
  return attn != nullptr && attn->cfg.use_attention;
}

const CriticParams* attention_params(const AnyCritic& critic) {
  const auto* attn = std::get_if<CriticParams>(&critic);
  return (attn != nullptr && attn->cfg.use_attention) ? attn : nullptr;
}

std::vector<Observation> variant_view(VariantKind kind, const WorldState& state,
                                      std::vector<Observation> obs) {
  if (kind == VariantKind::OracleComm)
    for (auto& o : obs) o.landmark_view = state.landmark_pos;
  return obs;
}

}  // namespace ftattn
