#pragma once

#include <cmath>
#include <vector>

#include "ftattn/nn.hpp"
#include "ftattn/types.hpp"

namespace ftattn {

/// Adam with bias correction. Moment buffers are keyed by visitation
/// order, which is fixed for a given parameter struct.
class Adam {
 public:
  Adam(const std::vector<ParamRef>& params, Real lr, Real beta1 = 0.9, Real beta2 = 0.999,
       Real eps = 1e-8)
      : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {
    for (const auto& p : params) {
      m_.push_back(Vector::Zero(p.size()));
      v_.push_back(Vector::Zero(p.size()));
    }
  }

  /// In-place descent step: params <- params - lr * m_hat / (sqrt(v_hat) + eps).
  void step(const std::vector<ParamRef>& params, const std::vector<ParamRef>& grads) {
    if (params.size() != m_.size() || grads.size() != m_.size())
      throw InputError("optimizer state does not match parameter layout");
    ++t_;
    const Real bc1 = 1.0 - std::pow(beta1_, static_cast<Real>(t_));
    const Real bc2 = 1.0 - std::pow(beta2_, static_cast<Real>(t_));
    for (size_t g = 0; g < params.size(); ++g) {
      if (params[g].size() != grads[g].size() || params[g].size() != m_[g].size())
        throw InputError("gradient shape does not match parameter " + params[g].name);
      Real* p = params[g].data;
      const Real* d = grads[g].data;
      Vector& m = m_[g];
      Vector& v = v_[g];
      for (Index k = 0; k < m.size(); ++k) {
        m[k] = beta1_ * m[k] + (1.0 - beta1_) * d[k];
        v[k] = beta2_ * v[k] + (1.0 - beta2_) * d[k] * d[k];
        p[k] -= lr_ * (m[k] / bc1) / (std::sqrt(v[k] / bc2) + eps_);
      }
    }
  }

  long steps_taken() const { return t_; }

 private:
  Real lr_, beta1_, beta2_, eps_;
  long t_ = 0;
  std::vector<Vector> m_, v_;
};

}  // namespace ftattn
