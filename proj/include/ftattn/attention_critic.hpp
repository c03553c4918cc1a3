#pragma once

#include <string>
#include <vector>

#include "ftattn/nn.hpp"
#include "ftattn/rng.hpp"
#include "ftattn/types.hpp"

namespace ftattn {

struct CriticConfig {
  int n_agents = 3;
  int obs_dim = 10;
  int n_actions = 5;
  int hidden = 128;
  int heads = 4;
  bool use_attention = true;  // false: peer term fixed at zero (independent critic)
  Real attn_scale = 0.0;      // 0 resolves to 1/sqrt(hidden/heads)

  int head_dim() const { return hidden / heads; }
  int enc_in() const { return obs_dim + n_actions; }
  Real resolved_scale() const {
    return attn_scale > 0.0 ? attn_scale : 1.0 / std::sqrt(static_cast<Real>(head_dim()));
  }
  void validate() const;
};

/// Centralized critic family: per-agent two-layer encoders, shared per-head
/// query/key/value projections, per-agent Q-heads emitting one value per
/// candidate action of the owning agent.
struct CriticParams {
  CriticConfig cfg;
  std::vector<TwoLayerNet> encoder;  // per agent: (obs+act) -> hidden -> hidden
  std::vector<Matrix> query_proj;    // per head: head_dim x hidden
  std::vector<Matrix> key_proj;      // per head: head_dim x hidden
  std::vector<Matrix> value_proj;    // per head: head_dim x hidden
  std::vector<TwoLayerNet> q_head;   // per agent: 2*hidden -> hidden -> n_actions

  static CriticParams zeros(const CriticConfig& cfg);
  static CriticParams init(const CriticConfig& cfg, Rng& rng);

  CriticParams zeros_like() const { return zeros(cfg); }
  void zero_query_key();  // zeroes every head's query and key projections

  template <class Self>
  static void visit_refs(Self& self, std::vector<ParamRef>& out) {
    for (size_t i = 0; i < self.encoder.size(); ++i)
      collect(out, "enc" + std::to_string(i), self.encoder[i]);
    for (size_t h = 0; h < self.query_proj.size(); ++h) {
      collect(out, "attn.query" + std::to_string(h), self.query_proj[h]);
      collect(out, "attn.key" + std::to_string(h), self.key_proj[h]);
      collect(out, "attn.value" + std::to_string(h), self.value_proj[h]);
    }
    for (size_t i = 0; i < self.q_head.size(); ++i)
      collect(out, "qhead" + std::to_string(i), self.q_head[i]);
  }

  std::vector<ParamRef> param_refs() {
    std::vector<ParamRef> out;
    visit_refs(*this, out);
    return out;
  }
};

/// Per-head attention rows; alpha[h](i, j) is agent i's weight on agent j.
/// The diagonal is structurally zero and every row sums to one.
struct AttentionTensor {
  std::vector<Matrix> alpha;  // heads entries of N x N
};

/// Row i is agent i's embedding of its own observation and action.
using Embedding = Matrix;  // N x hidden

// --- single-sample operations ----------------------------------------------

Embedding encode(const CriticParams& params, const std::vector<Vector>& observations,
                 const std::vector<Vector>& actions_onehot);

/// Same encoders with the action slot zeroed: agent i's committed action
/// never enters its own value row, so the row enumerates candidate actions
/// exactly (the counterfactual expectation needs every entry well defined).
Embedding encode_state(const CriticParams& params, const std::vector<Vector>& observations);

/// Queries from `query_emb`, keys from `key_emb`. The value rows use
/// action-free query embeddings against peers' action-carrying keys.
AttentionTensor attention_weights(const CriticParams& params, const Embedding& query_emb,
                                  const Embedding& key_emb);

/// Single-source form: queries and keys from the same embedding.
AttentionTensor attention_weights(const CriticParams& params, const Embedding& emb);

/// Attention as the critic evaluates it for a joint (observation, action)
/// sample: action-free queries, action-carrying keys.
AttentionTensor critic_attention(const CriticParams& params,
                                 const std::vector<Vector>& observations,
                                 const std::vector<Vector>& actions_onehot);

/// Peer contribution per agent: relu of the concatenated per-head weighted
/// sums of value-projected embeddings. Returns N x hidden.
Matrix aggregate(const CriticParams& params, const Embedding& emb, const AttentionTensor& attn);

/// N x n_actions; row i holds agent i's value for each of its candidate
/// actions with all other agents' actions fixed at the given joint action.
Matrix q_values(const CriticParams& params, const std::vector<Vector>& observations,
                const std::vector<Vector>& actions_onehot);

/// heads x N matrix of row entropies, 0 ln 0 := 0.
Matrix attention_entropy(const AttentionTensor& attn);

Vector onehot(int index, int size);

// --- batched training path --------------------------------------------------

struct CriticBatch {
  std::vector<Matrix> obs;  // per agent: B x obs_dim
  IntMatrix actions;        // B x N

  Index size() const { return actions.rows(); }
};

struct CriticForward {
  // action-carrying path (keys and values exposed to peers)
  std::vector<Matrix> input;       // per agent: B x (obs_dim + n_actions)
  std::vector<Matrix> enc_hidden;  // per agent: B x hidden, post-relu
  std::vector<Matrix> emb;         // per agent: B x hidden, post-relu
  // action-free path (own queries and Q rows)
  std::vector<Matrix> state_input;
  std::vector<Matrix> state_enc_hidden;
  std::vector<Matrix> state_emb;
  std::vector<std::vector<Matrix>> query, key, value;  // [agent][head]: B x head_dim
  std::vector<std::vector<Matrix>> attn;               // [head][agent]: B x N rows
  std::vector<Matrix> pooled;      // per agent: B x hidden, post-relu peer term
  std::vector<Matrix> qh_hidden;   // per agent: B x hidden, post-relu
  std::vector<Matrix> rows;        // per agent: B x n_actions
};

CriticForward critic_forward(const CriticParams& params, const CriticBatch& batch);

/// Reverse pass; `d_rows` matches `CriticForward::rows`. Gradients cover
/// every parameter, including the shared projections, which accumulate
/// contributions from all agents' rows.
CriticParams critic_backward(const CriticParams& params, const CriticBatch& batch,
                             const CriticForward& fwd, const std::vector<Matrix>& d_rows);

struct CriticLossGrads {
  Real loss = 0.0;
  CriticParams grads;
};

/// Joint regression loss: sum over agents of the batch-mean squared error
/// between the taken-action value and its target.
CriticLossGrads critic_gradients(const CriticParams& params, const CriticBatch& batch,
                                 const Matrix& targets);  // targets: B x N

}  // namespace ftattn
