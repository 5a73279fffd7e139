#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ssadr/approx/adam.hpp"
#include "ssadr/approx/approximator.hpp"
#include "ssadr/ddpg/replay_buffer.hpp"
#include "ssadr/rng.hpp"

namespace ssadr::adr {

inline constexpr std::size_t kTrajectorySamples = 10;

std::size_t feature_length(std::size_t state_dim, std::size_t action_dim);

// (state, action) pairs at kTrajectorySamples evenly spaced steps, first and
// last included. Shorter trajectories use every step and are zero-padded.
std::vector<double> featurize_trajectory(
    std::span<const ddpg::Transition> transitions, std::size_t state_dim,
    std::size_t action_dim);

struct DiscriminatorConfig {
  std::vector<std::size_t> hidden{64, 64};
  double learning_rate = 1e-3;
};

// Classifies trajectories as coming from a randomized instance (label 1) or
// from the reference environment (label 0).
class Discriminator {
 public:
  Discriminator(std::size_t feature_len, DiscriminatorConfig config,
                Rng& init_rng);

  std::size_t feature_length() const { return net_.input_size(); }

  // P(randomized | features)
  double probability(std::span<const double> features) const;
  double logit(std::span<const double> features) const;

  // Mean binary cross-entropy over both batches.
  double loss(std::span<const std::vector<double>> ref_feats,
              std::span<const std::vector<double>> rand_feats) const;
  std::vector<double> loss_gradient(
      std::span<const std::vector<double>> ref_feats,
      std::span<const std::vector<double>> rand_feats) const;

  const approx::Approximator& net() const { return net_; }
  approx::Approximator& net() { return net_; }
  approx::Adam& optimizer() { return opt_; }

 private:
  approx::Approximator net_;
  approx::Adam opt_;
};

// log D(randomized | features); always <= 0.
double discriminator_reward(const Discriminator& d,
                            std::span<const double> features);

// One Adam step on the cross-entropy; returns the loss before the step.
double train_discriminator(Discriminator& d,
                           std::span<const std::vector<double>> ref_feats,
                           std::span<const std::vector<double>> rand_feats);

}  // namespace ssadr::adr
