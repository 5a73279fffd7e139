#include "ssadr/ddpg/replay_buffer.hpp"

#include "ssadr/errors.hpp"

namespace ssadr::ddpg {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : storage_(capacity) {
  if (capacity == 0) throw ConfigError("replay capacity must be positive");
}

void ReplayBuffer::push(Transition t) {
  storage_[head_] = std::move(t);
  head_ = (head_ + 1) % storage_.size();
  if (size_ < storage_.size()) ++size_;
}

void ReplayBuffer::clear() {
  head_ = 0;
  size_ = 0;
}

const Transition& ReplayBuffer::at(std::size_t i) const {
  if (i >= size_) throw ArgumentError("replay index out of range");
  const std::size_t oldest = size_ < storage_.size() ? 0 : head_;
  return storage_[(oldest + i) % storage_.size()];
}

std::vector<std::size_t> ReplayBuffer::sample_indices(std::size_t n,
                                                      Rng& rng) const {
  if (size_ == 0) throw UsageError("sampling from an empty replay buffer");
  std::uniform_int_distribution<std::size_t> pick(0, size_ - 1);
  std::vector<std::size_t> out(n);
  for (auto& i : out) i = pick(rng);
  return out;
}

}  // namespace ssadr::ddpg
