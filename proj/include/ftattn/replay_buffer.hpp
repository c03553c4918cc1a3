#pragma once

#include <vector>

#include "ftattn/rng.hpp"
#include "ftattn/types.hpp"

namespace ftattn {

/// One joint step across all agents. The gifted mask is carried for
/// analysis only and is never fed to learners.
struct Transition {
  std::vector<Vector> obs;       // per agent, flattened observation
  IntVector actions;             // N
  Vector rewards;                // N, identical entries under the shared reward
  std::vector<Vector> next_obs;  // per agent
  bool done = false;
  BoolVec gifted;                // N
};

/// Fixed-capacity cyclic store with uniform with-replacement sampling.
/// Single writer; sampling never mutates contents.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(long capacity);

  /// FIFO insert; overwrites the oldest entry once full.
  void push(Transition t);

  /// Uniform sample of `batch` stored transitions (with replacement).
  /// Pointers stay valid until the next push. Throws NotReadyError when
  /// fewer than `batch` transitions are stored.
  std::vector<const Transition*> sample(long batch, Rng& rng) const;

  long size() const { return static_cast<long>(slots_.size()); }
  long capacity() const { return capacity_; }

 private:
  long capacity_;
  long cursor_ = 0;  // next slot to overwrite once full
  std::vector<Transition> slots_;
  Index obs_dim_ = -1;  // fixed by the first push
  Index n_agents_ = -1;
};

}  // namespace ftattn
