#include "ftattn/concat_critic.hpp"

#include <cmath>

namespace ftattn {

void ConcatCriticConfig::validate() const {
  if (n_agents < 2) throw ConfigError("critic needs at least two agents");
  if (obs_dim < 1 || n_actions < 1 || hidden < 1)
    throw ConfigError("bad critic dimensions");
}

ConcatCriticParams ConcatCriticParams::zeros(const ConcatCriticConfig& cfg) {
  cfg.validate();
  ConcatCriticParams p;
  p.cfg = cfg;
  for (int i = 0; i < cfg.n_agents; ++i) {
    p.encoder.emplace_back(cfg.input_dim(), cfg.hidden, cfg.hidden);
    p.q_head.emplace_back(cfg.hidden, cfg.hidden, cfg.n_actions);
  }
  return p;
}

ConcatCriticParams ConcatCriticParams::init(const ConcatCriticConfig& cfg, Rng& rng) {
  ConcatCriticParams p = zeros(cfg);
  for (auto& net : p.encoder) {
    init_relu_layer(net.l1, rng);
    init_relu_layer(net.l2, rng);
  }
  for (auto& net : p.q_head) {
    init_relu_layer(net.l1, rng);
    init_output_layer(net.l2, rng, 0.01);
    net.l2.bias.setConstant(-20.0);  // return-scale start, see attention critic
  }
  return p;
}

ConcatForward concat_forward(const ConcatCriticParams& params, const CriticBatch& batch) {
  const auto& cfg = params.cfg;
  const Index b = batch.size();
  if (static_cast<int>(batch.obs.size()) != cfg.n_agents)
    throw InputError("batch agent count mismatch");

  ConcatForward f;
  Matrix base = Matrix::Zero(b, cfg.input_dim());
  for (int i = 0; i < cfg.n_agents; ++i) {
    if (batch.obs[i].rows() != b || batch.obs[i].cols() != cfg.obs_dim)
      throw InputError("batch observation shape mismatch");
    base.middleCols(i * cfg.obs_dim, cfg.obs_dim) = batch.obs[i];
  }
  const int act_base = cfg.n_agents * cfg.obs_dim;
  for (Index r = 0; r < b; ++r)
    for (int i = 0; i < cfg.n_agents; ++i) {
      const int a = batch.actions(r, i);
      if (a < 0 || a >= cfg.n_actions) throw InputError("batch action index out of range");
      base(r, act_base + i * cfg.n_actions + a) = 1.0;
    }

  f.input.resize(cfg.n_agents);
  f.enc_hidden.resize(cfg.n_agents);
  f.enc_out.resize(cfg.n_agents);
  f.qh_hidden.resize(cfg.n_agents);
  f.rows.resize(cfg.n_agents);
  for (int i = 0; i < cfg.n_agents; ++i) {
    f.input[i] = base;
    f.input[i].middleCols(act_base + i * cfg.n_actions, cfg.n_actions).setZero();
    f.enc_hidden[i] = relu(params.encoder[i].l1.forward(f.input[i]));
    f.enc_out[i] = relu(params.encoder[i].l2.forward(f.enc_hidden[i]));
    f.qh_hidden[i] = relu(params.q_head[i].l1.forward(f.enc_out[i]));
    f.rows[i] = params.q_head[i].l2.forward(f.qh_hidden[i]);
  }
  return f;
}

ConcatCriticParams concat_backward(const ConcatCriticParams& params, const ConcatForward& fwd,
                                   const std::vector<Matrix>& d_rows) {
  const auto& cfg = params.cfg;
  ConcatCriticParams g = params.zeros_like();
  for (int i = 0; i < cfg.n_agents; ++i) {
    Matrix d = affine_backward(params.q_head[i].l2, fwd.qh_hidden[i], d_rows[i],
                               g.q_head[i].l2);
    d.array() *= relu_mask(fwd.qh_hidden[i]).array();
    d = affine_backward(params.q_head[i].l1, fwd.enc_out[i], d, g.q_head[i].l1);
    d.array() *= relu_mask(fwd.enc_out[i]).array();
    d = affine_backward(params.encoder[i].l2, fwd.enc_hidden[i], d, g.encoder[i].l2);
    d.array() *= relu_mask(fwd.enc_hidden[i]).array();
    affine_backward(params.encoder[i].l1, fwd.input[i], d, g.encoder[i].l1);
  }
  return g;
}

ConcatLossGrads concat_gradients(const ConcatCriticParams& params, const CriticBatch& batch,
                                 const Matrix& targets) {
  const auto& cfg = params.cfg;
  const Index b = batch.size();
  if (targets.rows() != b || targets.cols() != cfg.n_agents)
    throw InputError("target shape mismatch");

  const ConcatForward fwd = concat_forward(params, batch);
  std::vector<Matrix> d_rows(cfg.n_agents, Matrix::Zero(b, cfg.n_actions));
  Real loss = 0.0;
  for (int i = 0; i < cfg.n_agents; ++i) {
    for (Index r = 0; r < b; ++r) {
      const Real diff = fwd.rows[i](r, batch.actions(r, i)) - targets(r, i);
      loss += diff * diff / static_cast<Real>(b);
      d_rows[i](r, batch.actions(r, i)) = 2.0 * diff / static_cast<Real>(b);
    }
  }
  if (!std::isfinite(loss)) throw NumericError("critic loss is not finite");
  return {loss, concat_backward(params, fwd, d_rows)};
}

}  // namespace ftattn
