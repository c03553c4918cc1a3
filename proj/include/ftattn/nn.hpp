#pragma once

#include <Eigen/Core>

#include <cmath>
#include <string>
#include <vector>

#include "ftattn/rng.hpp"
#include "ftattn/types.hpp"

namespace ftattn {

/// Affine map y = W x + b. Batched convention: rows of X are samples,
/// so forward(X) = X * W^T + 1 b^T.
struct LinearLayer {
  Matrix weight;  // out x in
  Vector bias;    // out

  LinearLayer() = default;
  LinearLayer(Index out, Index in) : weight(Matrix::Zero(out, in)), bias(Vector::Zero(out)) {}

  Index in_dim() const { return weight.cols(); }
  Index out_dim() const { return weight.rows(); }

  Matrix forward(const Matrix& x) const {
    return (x * weight.transpose()).rowwise() + bias.transpose();
  }
};

/// x -> l2(act(l1(x))). The output activation is the caller's business.
struct TwoLayerNet {
  LinearLayer l1, l2;

  TwoLayerNet() = default;
  TwoLayerNet(Index in, Index hidden, Index out) : l1(hidden, in), l2(out, hidden) {}
};

template <typename Derived>
auto relu(const Eigen::MatrixBase<Derived>& x) {
  using S = typename Derived::Scalar;
  return x.cwiseMax(S(0));
}

/// Gradient passthrough mask from the post-activation value.
template <typename Derived>
auto relu_mask(const Eigen::MatrixBase<Derived>& activated) {
  using S = typename Derived::Scalar;
  return (activated.array() > S(0)).template cast<S>().matrix();
}

/// Row-wise softmax with max subtraction. Optional `skip` column is
/// structurally excluded: its output is exactly zero and it never enters
/// the normalizer.
template <typename Scalar>
MatrixX<Scalar> masked_softmax_rows(const MatrixX<Scalar>& logits, Index skip = -1) {
  MatrixX<Scalar> out(logits.rows(), logits.cols());
  for (Index r = 0; r < logits.rows(); ++r) {
    Scalar maxv = -std::numeric_limits<Scalar>::infinity();
    for (Index c = 0; c < logits.cols(); ++c)
      if (c != skip) maxv = std::max(maxv, logits(r, c));
    Scalar total = Scalar(0);
    for (Index c = 0; c < logits.cols(); ++c) {
      if (c == skip) {
        out(r, c) = Scalar(0);
      } else {
        out(r, c) = std::exp(logits(r, c) - maxv);
        total += out(r, c);
      }
    }
    out.row(r) /= total;
    if (skip >= 0) out(r, skip) = Scalar(0);
  }
  return out;
}

/// Row-wise Shannon entropy, -sum p ln p with 0 ln 0 := 0.
template <typename Scalar>
VectorX<Scalar> row_entropy(const MatrixX<Scalar>& probs) {
  VectorX<Scalar> h = VectorX<Scalar>::Zero(probs.rows());
  for (Index r = 0; r < probs.rows(); ++r)
    for (Index c = 0; c < probs.cols(); ++c) {
      const Scalar p = probs(r, c);
      if (p > Scalar(0)) h[r] -= p * std::log(p);
    }
  return h;
}

// --- initialization -------------------------------------------------------

inline void fill_uniform(Matrix& m, Real bound, Rng& rng) {
  for (Index c = 0; c < m.cols(); ++c)
    for (Index r = 0; r < m.rows(); ++r) m(r, c) = rng.uniform(-bound, bound);
}

/// He-style fan-in scaling for relu layers.
inline void init_relu_layer(LinearLayer& l, Rng& rng) {
  fill_uniform(l.weight, std::sqrt(6.0 / static_cast<Real>(l.in_dim())), rng);
  l.bias.setZero();
}

/// Linear output head; `scale` shrinks the spread for near-zero starts.
inline void init_output_layer(LinearLayer& l, Rng& rng, Real scale = 1.0) {
  fill_uniform(l.weight, scale * std::sqrt(3.0 / static_cast<Real>(l.in_dim())), rng);
  l.bias.setZero();
}

// --- backward helpers ------------------------------------------------------

/// Accumulates affine-layer gradients given upstream dY; returns dX.
inline Matrix affine_backward(const LinearLayer& l, const Matrix& x, const Matrix& dy,
                              LinearLayer& grad) {
  grad.weight.noalias() += dy.transpose() * x;
  grad.bias.noalias() += dy.colwise().sum().transpose();
  return dy * l.weight;
}

// --- parameter visitation ---------------------------------------------------

/// Mutable view over one named parameter array; the backbone for the
/// optimizer, soft updates, finite-difference probing and checkpoints.
struct ParamRef {
  std::string name;
  Real* data;
  Index rows;
  Index cols;

  Index size() const { return rows * cols; }
};

inline void collect(std::vector<ParamRef>& out, const std::string& name, Matrix& m) {
  out.push_back({name, m.data(), m.rows(), m.cols()});
}

inline void collect(std::vector<ParamRef>& out, const std::string& name, Vector& v) {
  out.push_back({name, v.data(), v.size(), 1});
}

inline void collect(std::vector<ParamRef>& out, const std::string& prefix, TwoLayerNet& net) {
  collect(out, prefix + ".l1.weight", net.l1.weight);
  collect(out, prefix + ".l1.bias", net.l1.bias);
  collect(out, prefix + ".l2.weight", net.l2.weight);
  collect(out, prefix + ".l2.bias", net.l2.bias);
}

inline Index total_size(const std::vector<ParamRef>& refs) {
  Index n = 0;
  for (const auto& r : refs) n += r.size();
  return n;
}

}  // namespace ftattn
