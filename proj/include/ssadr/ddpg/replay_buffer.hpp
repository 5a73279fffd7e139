#pragma once

#include <cstddef>
#include <vector>

#include "ssadr/envs/env.hpp"
#include "ssadr/rng.hpp"

namespace ssadr::ddpg {

struct Transition {
  std::vector<double> state;
  std::vector<double> action;
  double reward = 0.0;
  std::vector<double> next_state;
  double done = 0.0;  // 1 for a true terminal, 0 otherwise (incl. time-outs)
  envs::Point2 goal;
};

// Fixed-capacity FIFO ring. Once full, each push evicts the oldest element.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void push(Transition t);
  void clear();

  std::size_t size() const { return size_; }
  std::size_t capacity() const { return storage_.size(); }
  bool empty() const { return size_ == 0; }

  // Index 0 is the oldest retained transition.
  const Transition& at(std::size_t i) const;

  // Uniform with replacement.
  std::vector<std::size_t> sample_indices(std::size_t n, Rng& rng) const;

 private:
  std::vector<Transition> storage_;
  std::size_t head_ = 0;  // next write position
  std::size_t size_ = 0;
};

}  // namespace ssadr::ddpg
