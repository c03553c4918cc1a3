#pragma once

#include <string>
#include <vector>

#include "ftattn/attention_critic.hpp"
#include "ftattn/nn.hpp"
#include "ftattn/types.hpp"

namespace ftattn {

/// Selection-free centralized critic: every agent's Q network reads the
/// raw concatenation of all observations and all action one-hots.
struct ConcatCriticConfig {
  int n_agents = 3;
  int obs_dim = 10;
  int n_actions = 5;
  int hidden = 128;

  int input_dim() const { return n_agents * (obs_dim + n_actions); }
  void validate() const;
};

struct ConcatCriticParams {
  ConcatCriticConfig cfg;
  std::vector<TwoLayerNet> encoder;  // per agent: input_dim -> hidden -> hidden
  std::vector<TwoLayerNet> q_head;   // per agent: hidden -> hidden -> n_actions

  static ConcatCriticParams zeros(const ConcatCriticConfig& cfg);
  static ConcatCriticParams init(const ConcatCriticConfig& cfg, Rng& rng);
  ConcatCriticParams zeros_like() const { return zeros(cfg); }

  template <class Self>
  static void visit_refs(Self& self, std::vector<ParamRef>& out) {
    for (size_t i = 0; i < self.encoder.size(); ++i)
      collect(out, "flat_enc" + std::to_string(i), self.encoder[i]);
    for (size_t i = 0; i < self.q_head.size(); ++i)
      collect(out, "flat_qhead" + std::to_string(i), self.q_head[i]);
  }

  std::vector<ParamRef> param_refs() {
    std::vector<ParamRef> out;
    visit_refs(*this, out);
    return out;
  }
};

struct ConcatForward {
  // per agent: B x input_dim with the agent's own action block zeroed, so
  // each value row enumerates the agent's candidate actions exactly
  std::vector<Matrix> input;
  std::vector<Matrix> enc_hidden;  // per agent: B x hidden
  std::vector<Matrix> enc_out;     // per agent: B x hidden
  std::vector<Matrix> qh_hidden;   // per agent: B x hidden
  std::vector<Matrix> rows;        // per agent: B x n_actions
};

ConcatForward concat_forward(const ConcatCriticParams& params, const CriticBatch& batch);

ConcatCriticParams concat_backward(const ConcatCriticParams& params, const ConcatForward& fwd,
                                   const std::vector<Matrix>& d_rows);

struct ConcatLossGrads {
  Real loss = 0.0;
  ConcatCriticParams grads;
};

ConcatLossGrads concat_gradients(const ConcatCriticParams& params, const CriticBatch& batch,
                                 const Matrix& targets);

}  // namespace ftattn
