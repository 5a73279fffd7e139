#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ssadr/approx/adam.hpp"
#include "ssadr/approx/approximator.hpp"
#include "ssadr/ddpg/replay_buffer.hpp"
#include "ssadr/envs/env.hpp"
#include "ssadr/rng.hpp"

namespace ssadr::ddpg {

struct DdpgConfig {
  std::vector<std::size_t> actor_hidden{400, 300};
  std::vector<std::size_t> critic_hidden{400, 300};
  double actor_lr = 1e-3;
  double critic_lr = 1e-3;
  double gamma = 0.99;
  double tau = 0.005;
  double exploration_sigma = 0.1;
  std::size_t batch_size = 100;
};

struct UpdateStats {
  double critic_loss = 0.0;      // mean squared Bellman error before the step
  double actor_objective = 0.0;  // mean Q(s, pi(s)) after the critic step
};

// Actor input: the state with the goal appended.
std::vector<double> policy_input(std::span<const double> state,
                                 envs::Point2 goal);

// Deterministic actor output, optionally with additive Gaussian noise of
// scale `sigma`, clipped to [-1, 1].
std::vector<double> act_with(const approx::Approximator& actor,
                             std::span<const double> state, envs::Point2 goal,
                             double sigma, Rng* rng);

// Deterministic actor-critic with target networks updated by Polyak
// averaging.
class DdpgAgent {
 public:
  DdpgAgent(std::size_t state_dim, std::size_t action_dim, DdpgConfig config,
            Rng& init_rng);

  std::vector<double> act(std::span<const double> state, envs::Point2 goal,
                          bool explore, Rng& rng) const;

  // One critic step, one actor step, one soft target update. Returns nullopt
  // (and changes nothing) when the buffer holds fewer than batch_size items.
  // Throws NumericError if any parameter becomes non-finite.
  std::optional<UpdateStats> update(const ReplayBuffer& buffer,
                                    std::size_t batch_size, Rng& rng);

  // Detached copy of the online actor parameters.
  std::vector<double> copy_weights() const;

  const DdpgConfig& config() const { return config_; }
  std::size_t state_dim() const { return state_dim_; }
  std::size_t action_dim() const { return action_dim_; }

  const approx::Approximator& actor() const { return actor_; }
  const approx::Approximator& critic() const { return critic_; }
  const approx::Approximator& target_actor() const { return target_actor_; }
  const approx::Approximator& target_critic() const { return target_critic_; }
  approx::Approximator& actor() { return actor_; }
  approx::Approximator& critic() { return critic_; }
  approx::Approximator& target_actor() { return target_actor_; }
  approx::Approximator& target_critic() { return target_critic_; }

  // Critic value of one (state, goal, action).
  double q_value(std::span<const double> state, envs::Point2 goal,
                 std::span<const double> action) const;

  void soft_update_targets();

 private:
  DdpgConfig config_;
  std::size_t state_dim_;
  std::size_t action_dim_;
  approx::Approximator actor_;
  approx::Approximator critic_;
  approx::Approximator target_actor_;
  approx::Approximator target_critic_;
  approx::Adam actor_opt_;
  approx::Adam critic_opt_;
  std::vector<double> actor_grad_;
  std::vector<double> critic_grad_;
};

}  // namespace ssadr::ddpg
