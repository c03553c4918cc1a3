#include "ftattn/replay_buffer.hpp"

namespace ftattn {

ReplayBuffer::ReplayBuffer(long capacity) : capacity_(capacity) {
  if (capacity < 1) throw ConfigError("replay capacity must be positive");
}

void ReplayBuffer::push(Transition t) {
  if (t.obs.empty() || t.obs.size() != t.next_obs.size() ||
      static_cast<Index>(t.obs.size()) != t.actions.size())
    throw InputError("transition agent counts disagree");
  if (n_agents_ < 0) {
    n_agents_ = static_cast<Index>(t.obs.size());
    obs_dim_ = t.obs[0].size();
  }
  if (static_cast<Index>(t.obs.size()) != n_agents_)
    throw InputError("transition agent count mismatch");
  for (Index i = 0; i < n_agents_; ++i)
    if (t.obs[i].size() != obs_dim_ || t.next_obs[i].size() != obs_dim_)
      throw InputError("transition observation dimension mismatch");
  if (t.rewards.size() != n_agents_) throw InputError("transition reward length mismatch");
  if (!t.rewards.allFinite()) throw InputError("transition rewards must be finite");

  if (size() < capacity_) {
    slots_.push_back(std::move(t));
  } else {
    slots_[cursor_] = std::move(t);
    cursor_ = (cursor_ + 1) % capacity_;
  }
}

std::vector<const Transition*> ReplayBuffer::sample(long batch, Rng& rng) const {
  if (batch < 1) throw InputError("batch size must be positive");
  if (size() < batch)
    throw NotReadyError("replay holds " + std::to_string(size()) + " transitions, need " +
                        std::to_string(batch));
  std::vector<const Transition*> out;
  out.reserve(batch);
  for (long k = 0; k < batch; ++k)
    out.push_back(&slots_[rng.uniform_int(static_cast<int>(size()))]);
  return out;
}

}  // namespace ftattn
