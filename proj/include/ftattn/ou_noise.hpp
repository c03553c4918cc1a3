#pragma once

#include <utility>

#include "ftattn/rng.hpp"
#include "ftattn/types.hpp"

namespace ftattn {

/// Discrete Ornstein-Uhlenbeck recursion, mean-reverting to zero:
/// x' = x - theta * x + sigma * eta, eta ~ N(0, I).
/// Kept as an exploration utility; the discrete-action default explores
/// by sampling from the categorical policy instead.
struct OUState {
  Vector x;
  Real theta = 0.15;
  Real sigma = 0.2;

  static OUState zeros(Index dim, Real theta = 0.15, Real sigma = 0.2) {
    return {Vector::Zero(dim), theta, sigma};
  }
};

inline std::pair<OUState, Vector> ou_step(const OUState& state, Rng& rng) {
  OUState next = state;
  for (Index k = 0; k < next.x.size(); ++k)
    next.x[k] = state.x[k] - state.theta * state.x[k] + state.sigma * rng.normal();
  return {next, next.x};
}

}  // namespace ftattn
