#pragma once

#include <string>
#include <variant>
#include <vector>

#include "ftattn/attention_critic.hpp"
#include "ftattn/concat_critic.hpp"
#include "ftattn/env.hpp"

namespace ftattn {

/// Learner variants sharing one trainer. They differ only in what the
/// critic (and, for OracleComm, the whole learner) gets to see:
///   FTAttn      — attention critic over all agents' encoded inputs
///   Independent — critic of agent i sees only (o_i, a_i)
///   OracleComm  — every landmark view replaced by ground truth before
///                 both acting and critic evaluation (communication upper bound)
///   SharedAll   — critic reads the unselected concatenation of all
///                 observations and actions
enum class VariantKind { FTAttn, Independent, OracleComm, SharedAll };

std::string variant_name(VariantKind kind);
VariantKind parse_variant(const std::string& name);  // throws ConfigError

using AnyCritic = std::variant<CriticParams, ConcatCriticParams>;

AnyCritic make_critic(VariantKind kind, int n_agents, int obs_dim, int n_actions, int hidden,
                      int heads, Rng& rng);

std::vector<ParamRef> critic_refs(AnyCritic& critic);

/// Per-agent candidate-action value rows, forward only.
std::vector<Matrix> critic_rows(const AnyCritic& critic, const CriticBatch& batch);

struct AnyLossGrads {
  Real loss = 0.0;
  AnyCritic grads;
};

AnyLossGrads critic_loss_grads(const AnyCritic& critic, const CriticBatch& batch,
                               const Matrix& targets);

/// True when the critic produces attention weights worth reporting.
bool has_attention(const AnyCritic& critic);

/// The attention critic, when present.
const CriticParams* attention_params(const AnyCritic& critic);

/// Applies the variant's observation substitution to a freshly observed
/// joint view. Identity except for OracleComm.
std::vector<Observation> variant_view(VariantKind kind, const WorldState& state,
                                      std::vector<Observation> obs);

}  // namespace ftattn
