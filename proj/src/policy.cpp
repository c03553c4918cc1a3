#include "ftattn/policy.hpp"

#include <cmath>

namespace ftattn {

void PolicyConfig::validate() const {
  if (n_agents < 1 || obs_dim < 1 || n_actions < 1 || hidden < 1)
    throw ConfigError("bad policy dimensions");
}

PolicyParams PolicyParams::zeros(const PolicyConfig& cfg) {
  cfg.validate();
  PolicyParams p;
  p.cfg = cfg;
  for (int i = 0; i < cfg.n_agents; ++i)
    p.net.emplace_back(cfg.obs_dim, cfg.hidden, cfg.n_actions);
  return p;
}

PolicyParams PolicyParams::init(const PolicyConfig& cfg, Rng& rng) {
  PolicyParams p = zeros(cfg);
  for (auto& net : p.net) {
    init_relu_layer(net.l1, rng);
    // near-uniform initial action distribution
    init_output_layer(net.l2, rng, 0.01);
  }
  return p;
}

PolicyForward policy_forward(const PolicyParams& params, int agent, const Matrix& obs) {
  if (agent < 0 || agent >= params.cfg.n_agents) throw InputError("agent index out of range");
  if (obs.cols() != params.cfg.obs_dim) throw InputError("observation dimension mismatch");
  const auto& net = params.net[agent];
  PolicyForward f;
  f.hidden = relu(net.l1.forward(obs));
  f.logits = net.l2.forward(f.hidden);
  f.probs = masked_softmax_rows<Real>(f.logits);
  f.logp.resize(f.logits.rows(), f.logits.cols());
  for (Index r = 0; r < f.logits.rows(); ++r) {
    // log-softmax via the same max-shift used by the softmax
    const Real maxv = f.logits.row(r).maxCoeff();
    Real total = 0.0;
    for (Index c = 0; c < f.logits.cols(); ++c) total += std::exp(f.logits(r, c) - maxv);
    const Real log_norm = maxv + std::log(total);
    f.logp.row(r) = f.logits.row(r).array() - log_norm;
  }
  return f;
}

void policy_backward(const PolicyParams& params, int agent, const Matrix& obs,
                     const PolicyForward& fwd, const Matrix& d_logits, PolicyParams& grads) {
  const auto& net = params.net[agent];
  Matrix d_hidden = affine_backward(net.l2, fwd.hidden, d_logits, grads.net[agent].l2);
  d_hidden.array() *= relu_mask(fwd.hidden).array();
  affine_backward(net.l1, obs, d_hidden, grads.net[agent].l1);
}

Vector action_probs(const PolicyParams& params, int agent, const Vector& obs) {
  const PolicyForward f = policy_forward(params, agent, Matrix(obs.transpose()));
  return f.probs.row(0).transpose();
}

int sample_action(const PolicyParams& params, int agent, const Vector& obs, Rng& rng) {
  return rng.categorical(action_probs(params, agent, obs));
}

int greedy_action(const PolicyParams& params, int agent, const Vector& obs) {
  const Vector p = action_probs(params, agent, obs);
  Index best = 0;
  p.maxCoeff(&best);  // first maximal entry, so ties go to the lowest index
  return static_cast<int>(best);
}

}  // namespace ftattn
