#include "ftattn/attention_critic.hpp"

#include <cmath>

namespace ftattn {

void CriticConfig::validate() const {
  if (n_agents < 2) throw ConfigError("critic needs at least two agents");
  if (obs_dim < 1 || n_actions < 1) throw ConfigError("bad critic input dimensions");
  if (hidden < 1 || heads < 1) throw ConfigError("bad critic width");
  if (hidden % heads != 0) throw ConfigError("head count must divide hidden width");
}

CriticParams CriticParams::zeros(const CriticConfig& cfg) {
  cfg.validate();
  CriticParams p;
  p.cfg = cfg;
  for (int i = 0; i < cfg.n_agents; ++i) {
    p.encoder.emplace_back(cfg.enc_in(), cfg.hidden, cfg.hidden);
    p.q_head.emplace_back(2 * cfg.hidden, cfg.hidden, cfg.n_actions);
  }
  for (int h = 0; h < cfg.heads; ++h) {
    p.query_proj.emplace_back(Matrix::Zero(cfg.head_dim(), cfg.hidden));
    p.key_proj.emplace_back(Matrix::Zero(cfg.head_dim(), cfg.hidden));
    p.value_proj.emplace_back(Matrix::Zero(cfg.head_dim(), cfg.hidden));
  }
  return p;
}

CriticParams CriticParams::init(const CriticConfig& cfg, Rng& rng) {
  CriticParams p = zeros(cfg);
  for (auto& net : p.encoder) {
    init_relu_layer(net.l1, rng);
    init_relu_layer(net.l2, rng);
  }
  const Real proj_bound = std::sqrt(6.0 / static_cast<Real>(cfg.hidden + cfg.head_dim()));
  for (int h = 0; h < cfg.heads; ++h) {
    fill_uniform(p.query_proj[h], proj_bound, rng);
    fill_uniform(p.key_proj[h], proj_bound, rng);
    fill_uniform(p.value_proj[h], proj_bound, rng);
  }
  for (auto& net : p.q_head) {
    init_relu_layer(net.l1, rng);
    init_output_layer(net.l2, rng, 0.01);
    // start at the return scale of the coverage cost so regression spends
    // its budget on structure rather than on the magnitude transient
    net.l2.bias.setConstant(-20.0);
  }
  return p;
}

void CriticParams::zero_query_key() {
  for (auto& m : query_proj) m.setZero();
  for (auto& m : key_proj) m.setZero();
}

Vector onehot(int index, int size) {
  if (index < 0 || index >= size) throw InputError("one-hot index out of range");
  Vector v = Vector::Zero(size);
  v[index] = 1.0;
  return v;
}

namespace {

void check_sample_dims(const CriticParams& params, const std::vector<Vector>& observations,
                       const std::vector<Vector>& actions_onehot) {
  const auto& cfg = params.cfg;
  if (static_cast<int>(observations.size()) != cfg.n_agents ||
      static_cast<int>(actions_onehot.size()) != cfg.n_agents)
    throw InputError("expected one observation and one action per agent");
  for (const auto& o : observations)
    if (o.size() != cfg.obs_dim) throw InputError("observation dimension mismatch");
  for (const auto& a : actions_onehot)
    if (a.size() != cfg.n_actions) throw InputError("action one-hot dimension mismatch");
}

/// Row-wise softmax over columns j != skip of a B x N logit matrix;
/// subtracts the per-row max before exponentiating.
Matrix softmax_skip_col(const Matrix& logits, Index skip) {
  return masked_softmax_rows<Real>(logits, skip);
}

}  // namespace

Embedding encode(const CriticParams& params, const std::vector<Vector>& observations,
                 const std::vector<Vector>& actions_onehot) {
  check_sample_dims(params, observations, actions_onehot);
  const auto& cfg = params.cfg;
  Embedding emb(cfg.n_agents, cfg.hidden);
  for (int i = 0; i < cfg.n_agents; ++i) {
    Vector x(cfg.enc_in());
    x << observations[i], actions_onehot[i];
    const Vector h1 = relu(params.encoder[i].l1.weight * x + params.encoder[i].l1.bias);
    emb.row(i) =
        relu(params.encoder[i].l2.weight * h1 + params.encoder[i].l2.bias).transpose();
  }
  return emb;
}

Embedding encode_state(const CriticParams& params, const std::vector<Vector>& observations) {
  std::vector<Vector> zero_actions(params.cfg.n_agents,
                                   Vector::Zero(params.cfg.n_actions));
  return encode(params, observations, zero_actions);
}

AttentionTensor attention_weights(const CriticParams& params, const Embedding& query_emb,
                                  const Embedding& key_emb) {
  const auto& cfg = params.cfg;
  if (query_emb.rows() != cfg.n_agents || query_emb.cols() != cfg.hidden ||
      key_emb.rows() != cfg.n_agents || key_emb.cols() != cfg.hidden)
    throw InputError("embedding shape mismatch");
  const Real scale = cfg.resolved_scale();
  AttentionTensor out;
  out.alpha.reserve(cfg.heads);
  for (int h = 0; h < cfg.heads; ++h) {
    const Matrix q = query_emb * params.query_proj[h].transpose();  // N x head_dim
    const Matrix k = key_emb * params.key_proj[h].transpose();
    Matrix logits = scale * (q * k.transpose());  // N x N
    Matrix alpha(cfg.n_agents, cfg.n_agents);
    for (int i = 0; i < cfg.n_agents; ++i)
      alpha.row(i) = masked_softmax_rows<Real>(Matrix(logits.row(i)), i);
    out.alpha.push_back(std::move(alpha));
  }
  return out;
}

AttentionTensor attention_weights(const CriticParams& params, const Embedding& emb) {
  return attention_weights(params, emb, emb);
}

AttentionTensor critic_attention(const CriticParams& params,
                                 const std::vector<Vector>& observations,
                                 const std::vector<Vector>& actions_onehot) {
  return attention_weights(params, encode_state(params, observations),
                           encode(params, observations, actions_onehot));
}

Matrix aggregate(const CriticParams& params, const Embedding& emb, const AttentionTensor& attn) {
  const auto& cfg = params.cfg;
  if (static_cast<int>(attn.alpha.size()) != cfg.heads)
    throw InputError("attention tensor head count mismatch");
  const int dh = cfg.head_dim();
  Matrix pooled_pre = Matrix::Zero(cfg.n_agents, cfg.hidden);
  for (int h = 0; h < cfg.heads; ++h) {
    const Matrix v = emb * params.value_proj[h].transpose();  // N x head_dim
    pooled_pre.middleCols(h * dh, dh) = attn.alpha[h] * v;    // diagonal is zero
  }
  return relu(pooled_pre);
}

Matrix q_values(const CriticParams& params, const std::vector<Vector>& observations,
                const std::vector<Vector>& actions_onehot) {
  const auto& cfg = params.cfg;
  const Embedding emb = encode(params, observations, actions_onehot);
  const Embedding state_emb = encode_state(params, observations);
  Matrix pooled = Matrix::Zero(cfg.n_agents, cfg.hidden);
  if (cfg.use_attention) {
    const AttentionTensor attn = attention_weights(params, state_emb, emb);
    pooled = aggregate(params, emb, attn);
  }
  Matrix rows(cfg.n_agents, cfg.n_actions);
  for (int i = 0; i < cfg.n_agents; ++i) {
    Vector z(2 * cfg.hidden);
    z << state_emb.row(i).transpose(), pooled.row(i).transpose();
    const Vector h1 = relu(params.q_head[i].l1.weight * z + params.q_head[i].l1.bias);
    rows.row(i) =
        (params.q_head[i].l2.weight * h1 + params.q_head[i].l2.bias).transpose();
  }
  return rows;
}

Matrix attention_entropy(const AttentionTensor& attn) {
  const int heads = static_cast<int>(attn.alpha.size());
  if (heads == 0) throw InputError("empty attention tensor");
  const Index n = attn.alpha[0].rows();
  Matrix out(heads, n);
  for (int h = 0; h < heads; ++h) out.row(h) = row_entropy<Real>(attn.alpha[h]).transpose();
  return out;
}

// --- batched path ------------------------------------------------------------

CriticForward critic_forward(const CriticParams& params, const CriticBatch& batch) {
  const auto& cfg = params.cfg;
  const Index b = batch.size();
  if (static_cast<int>(batch.obs.size()) != cfg.n_agents)
    throw InputError("batch agent count mismatch");
  if (batch.actions.cols() != cfg.n_agents) throw InputError("batch action shape mismatch");

  CriticForward f;
  f.state_input.resize(cfg.n_agents);
  f.state_enc_hidden.resize(cfg.n_agents);
  f.state_emb.resize(cfg.n_agents);
  if (cfg.use_attention) {
    f.input.resize(cfg.n_agents);
    f.enc_hidden.resize(cfg.n_agents);
    f.emb.resize(cfg.n_agents);
  }
  for (int i = 0; i < cfg.n_agents; ++i) {
    if (batch.obs[i].rows() != b || batch.obs[i].cols() != cfg.obs_dim)
      throw InputError("batch observation shape mismatch");
    for (Index r = 0; r < b; ++r) {
      const int a = batch.actions(r, i);
      if (a < 0 || a >= cfg.n_actions) throw InputError("batch action index out of range");
    }
    if (cfg.use_attention) {
      Matrix x = Matrix::Zero(b, cfg.enc_in());
      x.leftCols(cfg.obs_dim) = batch.obs[i];
      for (Index r = 0; r < b; ++r) x(r, cfg.obs_dim + batch.actions(r, i)) = 1.0;
      f.input[i] = std::move(x);
      f.enc_hidden[i] = relu(params.encoder[i].l1.forward(f.input[i]));
      f.emb[i] = relu(params.encoder[i].l2.forward(f.enc_hidden[i]));
    }

    Matrix xs = Matrix::Zero(b, cfg.enc_in());
    xs.leftCols(cfg.obs_dim) = batch.obs[i];
    f.state_input[i] = std::move(xs);
    f.state_enc_hidden[i] = relu(params.encoder[i].l1.forward(f.state_input[i]));
    f.state_emb[i] = relu(params.encoder[i].l2.forward(f.state_enc_hidden[i]));
  }

  const int dh = cfg.head_dim();
  f.pooled.assign(cfg.n_agents, Matrix::Zero(b, cfg.hidden));
  if (cfg.use_attention) {
    const Real scale = cfg.resolved_scale();
    f.query.resize(cfg.n_agents);
    f.key.resize(cfg.n_agents);
    f.value.resize(cfg.n_agents);
    for (int i = 0; i < cfg.n_agents; ++i) {
      f.query[i].resize(cfg.heads);
      f.key[i].resize(cfg.heads);
      f.value[i].resize(cfg.heads);
      for (int h = 0; h < cfg.heads; ++h) {
        f.query[i][h].noalias() = f.state_emb[i] * params.query_proj[h].transpose();
        f.key[i][h].noalias() = f.emb[i] * params.key_proj[h].transpose();
        f.value[i][h].noalias() = f.emb[i] * params.value_proj[h].transpose();
      }
    }
    f.attn.assign(cfg.heads, std::vector<Matrix>(cfg.n_agents));
    for (int h = 0; h < cfg.heads; ++h) {
      for (int i = 0; i < cfg.n_agents; ++i) {
        Matrix logits = Matrix::Zero(b, cfg.n_agents);
        for (int j = 0; j < cfg.n_agents; ++j) {
          if (j == i) continue;
          logits.col(j) =
              scale * (f.query[i][h].array() * f.key[j][h].array()).rowwise().sum().matrix();
        }
        f.attn[h][i] = softmax_skip_col(logits, i);
        auto block = f.pooled[i].middleCols(h * dh, dh);
        for (int j = 0; j < cfg.n_agents; ++j) {
          if (j == i) continue;
          block.noalias() +=
              (f.value[j][h].array().colwise() * f.attn[h][i].col(j).array()).matrix();
        }
      }
    }
    for (int i = 0; i < cfg.n_agents; ++i) f.pooled[i] = relu(f.pooled[i]);
  }

  f.qh_hidden.resize(cfg.n_agents);
  f.rows.resize(cfg.n_agents);
  for (int i = 0; i < cfg.n_agents; ++i) {
    Matrix z(b, 2 * cfg.hidden);
    z.leftCols(cfg.hidden) = f.state_emb[i];
    z.rightCols(cfg.hidden) = f.pooled[i];
    f.qh_hidden[i] = relu(params.q_head[i].l1.forward(z));
    f.rows[i] = params.q_head[i].l2.forward(f.qh_hidden[i]);
  }
  return f;
}

CriticParams critic_backward(const CriticParams& params, const CriticBatch& batch,
                             const CriticForward& fwd, const std::vector<Matrix>& d_rows) {
  const auto& cfg = params.cfg;
  const Index b = batch.size();
  const int dh = cfg.head_dim();
  const Real scale = cfg.resolved_scale();
  CriticParams g = params.zeros_like();

  std::vector<Matrix> d_emb(cfg.n_agents, Matrix::Zero(b, cfg.hidden));
  std::vector<Matrix> d_state_emb(cfg.n_agents, Matrix::Zero(b, cfg.hidden));
  std::vector<std::vector<Matrix>> d_query, d_key, d_value;
  if (cfg.use_attention) {
    d_query.assign(cfg.n_agents, std::vector<Matrix>(cfg.heads));
    d_key.assign(cfg.n_agents, std::vector<Matrix>(cfg.heads));
    d_value.assign(cfg.n_agents, std::vector<Matrix>(cfg.heads));
    for (int i = 0; i < cfg.n_agents; ++i)
      for (int h = 0; h < cfg.heads; ++h) {
        d_query[i][h] = Matrix::Zero(b, dh);
        d_key[i][h] = Matrix::Zero(b, dh);
        d_value[i][h] = Matrix::Zero(b, dh);
      }
  }

  // Q-heads, then the peer-term path back into attention and embeddings.
  for (int i = 0; i < cfg.n_agents; ++i) {
    Matrix z(b, 2 * cfg.hidden);
    z.leftCols(cfg.hidden) = fwd.state_emb[i];
    z.rightCols(cfg.hidden) = fwd.pooled[i];

    Matrix d_hidden = affine_backward(params.q_head[i].l2, fwd.qh_hidden[i], d_rows[i],
                                      g.q_head[i].l2);
    d_hidden.array() *= relu_mask(fwd.qh_hidden[i]).array();
    const Matrix d_z = affine_backward(params.q_head[i].l1, z, d_hidden, g.q_head[i].l1);
    d_state_emb[i] += d_z.leftCols(cfg.hidden);

    if (!cfg.use_attention) continue;
    Matrix d_pooled = d_z.rightCols(cfg.hidden);
    d_pooled.array() *= relu_mask(fwd.pooled[i]).array();
    for (int h = 0; h < cfg.heads; ++h) {
      const auto d_head = d_pooled.middleCols(h * dh, dh);
      const Matrix& alpha = fwd.attn[h][i];  // B x N
      Matrix d_alpha = Matrix::Zero(b, cfg.n_agents);
      for (int j = 0; j < cfg.n_agents; ++j) {
        if (j == i) continue;
        d_value[j][h].noalias() +=
            (d_head.array().colwise() * alpha.col(j).array()).matrix();
        d_alpha.col(j) = (d_head.array() * fwd.value[j][h].array()).rowwise().sum().matrix();
      }
      // softmax backward: dl = alpha .* (d_alpha - rowdot(alpha, d_alpha))
      const Vector row_dot = (alpha.array() * d_alpha.array()).rowwise().sum().matrix();
      const Matrix d_logits =
          (alpha.array() * (d_alpha.array().colwise() - row_dot.array())).matrix();
      for (int j = 0; j < cfg.n_agents; ++j) {
        if (j == i) continue;
        d_query[i][h].noalias() +=
            scale * (fwd.key[j][h].array().colwise() * d_logits.col(j).array()).matrix();
        d_key[j][h].noalias() +=
            scale * (fwd.query[i][h].array().colwise() * d_logits.col(j).array()).matrix();
      }
    }
  }

  if (cfg.use_attention) {
    for (int i = 0; i < cfg.n_agents; ++i)
      for (int h = 0; h < cfg.heads; ++h) {
        g.query_proj[h].noalias() += d_query[i][h].transpose() * fwd.state_emb[i];
        g.key_proj[h].noalias() += d_key[i][h].transpose() * fwd.emb[i];
        g.value_proj[h].noalias() += d_value[i][h].transpose() * fwd.emb[i];
        d_state_emb[i].noalias() += d_query[i][h] * params.query_proj[h];
        d_emb[i].noalias() += d_key[i][h] * params.key_proj[h];
        d_emb[i].noalias() += d_value[i][h] * params.value_proj[h];
      }
  }

  for (int i = 0; i < cfg.n_agents; ++i) {
    // both encoder passes share weights; their gradients accumulate
    if (cfg.use_attention) {
      Matrix d_e = d_emb[i];
      d_e.array() *= relu_mask(fwd.emb[i]).array();
      Matrix d_h1 = affine_backward(params.encoder[i].l2, fwd.enc_hidden[i], d_e,
                                    g.encoder[i].l2);
      d_h1.array() *= relu_mask(fwd.enc_hidden[i]).array();
      affine_backward(params.encoder[i].l1, fwd.input[i], d_h1, g.encoder[i].l1);
    }

    Matrix d_se = d_state_emb[i];
    d_se.array() *= relu_mask(fwd.state_emb[i]).array();
    Matrix d_sh1 = affine_backward(params.encoder[i].l2, fwd.state_enc_hidden[i], d_se,
                                   g.encoder[i].l2);
    d_sh1.array() *= relu_mask(fwd.state_enc_hidden[i]).array();
    affine_backward(params.encoder[i].l1, fwd.state_input[i], d_sh1, g.encoder[i].l1);
  }
  return g;
}

CriticLossGrads critic_gradients(const CriticParams& params, const CriticBatch& batch,
                                 const Matrix& targets) {
  const auto& cfg = params.cfg;
  const Index b = batch.size();
  if (targets.rows() != b || targets.cols() != cfg.n_agents)
    throw InputError("target shape mismatch");

  const CriticForward fwd = critic_forward(params, batch);
  std::vector<Matrix> d_rows(cfg.n_agents, Matrix::Zero(b, cfg.n_actions));
  Real loss = 0.0;
  for (int i = 0; i < cfg.n_agents; ++i) {
    for (Index r = 0; r < b; ++r) {
      const Real diff = fwd.rows[i](r, batch.actions(r, i)) - targets(r, i);
      loss += diff * diff / static_cast<Real>(b);
      d_rows[i](r, batch.actions(r, i)) = 2.0 * diff / static_cast<Real>(b);
    }
  }
  if (!std::isfinite(loss))
    throw NumericError("critic loss is not finite (loss=" + std::to_string(loss) + ")");

  CriticLossGrads out{loss, critic_backward(params, batch, fwd, d_rows)};
  for (const auto& ref : out.grads.param_refs())
    for (Index k = 0; k < ref.size(); ++k)
      if (!std::isfinite(ref.data[k]))
        throw NumericError("non-finite critic gradient in " + ref.name);
  return out;
}

}  // namespace ftattn
