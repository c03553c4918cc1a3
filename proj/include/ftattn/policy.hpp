#pragma once

#include <string>
#include <vector>

#include "ftattn/nn.hpp"
#include "ftattn/rng.hpp"
#include "ftattn/types.hpp"

namespace ftattn {

struct PolicyConfig {
  int n_agents = 3;
  int obs_dim = 10;
  int n_actions = 5;
  int hidden = 128;
  void validate() const;
};

/// Per-agent categorical policies: observation -> action logits.
struct PolicyParams {
  PolicyConfig cfg;
  std::vector<TwoLayerNet> net;  // per agent: obs -> hidden -> n_actions

  static PolicyParams zeros(const PolicyConfig& cfg);
  static PolicyParams init(const PolicyConfig& cfg, Rng& rng);
  PolicyParams zeros_like() const { return zeros(cfg); }

  template <class Self>
  static void visit_refs(Self& self, std::vector<ParamRef>& out) {
    for (size_t i = 0; i < self.net.size(); ++i)
      collect(out, "policy" + std::to_string(i), self.net[i]);
  }

  std::vector<ParamRef> param_refs() {
    std::vector<ParamRef> out;
    visit_refs(*this, out);
    return out;
  }
};

struct PolicyForward {
  Matrix hidden;  // B x hidden, post-relu
  Matrix logits;  // B x n_actions
  Matrix probs;   // B x n_actions, rows sum to 1
  Matrix logp;    // B x n_actions
};

PolicyForward policy_forward(const PolicyParams& params, int agent, const Matrix& obs);

/// Accumulates gradients of a scalar objective with upstream d_logits.
void policy_backward(const PolicyParams& params, int agent, const Matrix& obs,
                     const PolicyForward& fwd, const Matrix& d_logits, PolicyParams& grads);

/// Probability vector for a single observation.
Vector action_probs(const PolicyParams& params, int agent, const Vector& obs);

int sample_action(const PolicyParams& params, int agent, const Vector& obs, Rng& rng);

/// Argmax action; ties resolve to the lowest index.
int greedy_action(const PolicyParams& params, int agent, const Vector& obs);

}  // namespace ftattn
