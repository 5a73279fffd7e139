#include "ssadr/ddpg/agent.hpp"

#include <algorithm>
#include <cmath>

#include "ssadr/errors.hpp"

namespace ssadr::ddpg {

using approx::Activation;
using approx::Approximator;
using approx::Matrix;

namespace {

std::vector<std::size_t> layers(std::size_t in,
                                const std::vector<std::size_t>& hidden,
                                std::size_t out) {
  std::vector<std::size_t> sizes{in};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(out);
  return sizes;
}

void require_finite(const Approximator& f, const char* role) {
  for (double p : f.parameters())
    if (!std::isfinite(p))
      throw NumericError(std::string("ddpg: non-finite parameter in ") + role);
}

void polyak(Approximator& target, const Approximator& online, double tau) {
  auto t = target.parameters();
  auto o = online.parameters();
  for (std::size_t i = 0; i < t.size(); ++i)
    t[i] = tau * o[i] + (1.0 - tau) * t[i];
}

}  // namespace

std::vector<double> policy_input(std::span<const double> state,
                                 envs::Point2 goal) {
  std::vector<double> x(state.begin(), state.end());
  x.push_back(goal.x);
  x.push_back(goal.y);
  return x;
}

std::vector<double> act_with(const Approximator& actor,
                             std::span<const double> state, envs::Point2 goal,
                             double sigma, Rng* rng) {
  auto a = actor.forward(policy_input(state, goal));
  if (rng && sigma > 0.0)
    for (double& v : a) v += sigma * standard_normal(*rng);
  for (double& v : a) v = std::clamp(v, -1.0, 1.0);
  return a;
}

DdpgAgent::DdpgAgent(std::size_t state_dim, std::size_t action_dim,
                     DdpgConfig config, Rng& init_rng)
    : config_(std::move(config)),
      state_dim_(state_dim),
      action_dim_(action_dim),
      actor_(layers(state_dim + 2, config_.actor_hidden, action_dim),
             Activation::Tanh, init_rng),
      critic_(layers(state_dim + 2 + action_dim, config_.critic_hidden, 1),
              Activation::Identity, init_rng),
      target_actor_(actor_),
      target_critic_(critic_),
      actor_opt_(actor_.parameter_count(), {.learning_rate = config_.actor_lr}),
      critic_opt_(critic_.parameter_count(),
                  {.learning_rate = config_.critic_lr}),
      actor_grad_(actor_.parameter_count()),
      critic_grad_(critic_.parameter_count()) {
  if (!(config_.tau > 0.0 && config_.tau <= 1.0))
    throw ConfigError("ddpg tau must be in (0, 1]");
  if (!(config_.gamma >= 0.0 && config_.gamma <= 1.0))
    throw ConfigError("ddpg gamma must be in [0, 1]");
}

std::vector<double> DdpgAgent::act(std::span<const double> state,
                                   envs::Point2 goal, bool explore,
                                   Rng& rng) const {
  return act_with(actor_, state, goal, explore ? config_.exploration_sigma : 0.0,
                  explore ? &rng : nullptr);
}

double DdpgAgent::q_value(std::span<const double> state, envs::Point2 goal,
                          std::span<const double> action) const {
  auto x = policy_input(state, goal);
  x.insert(x.end(), action.begin(), action.end());
  return critic_.forward(x)[0];
}

std::vector<double> DdpgAgent::copy_weights() const {
  const auto p = actor_.parameters();
  return {p.begin(), p.end()};
}

void DdpgAgent::soft_update_targets() {
  polyak(target_actor_, actor_, config_.tau);
  polyak(target_critic_, critic_, config_.tau);
}

std::optional<UpdateStats> DdpgAgent::update(const ReplayBuffer& buffer,
                                             std::size_t batch_size,
                                             Rng& rng) {
  if (batch_size == 0 || buffer.size() < batch_size) return std::nullopt;
  const auto idx = buffer.sample_indices(batch_size, rng);
  const std::size_t obs = state_dim_ + 2;
  const std::size_t B = batch_size;

  Matrix x(B, obs), x_next(B, obs), sa(B, obs + action_dim_);
  std::vector<double> reward(B), not_done(B);
  for (std::size_t b = 0; b < B; ++b) {
    const Transition& t = buffer.at(idx[b]);
    for (std::size_t k = 0; k < state_dim_; ++k) {
      x(b, k) = t.state[k];
      x_next(b, k) = t.next_state[k];
      sa(b, k) = t.state[k];
    }
    x(b, state_dim_) = x_next(b, state_dim_) = sa(b, state_dim_) = t.goal.x;
    x(b, state_dim_ + 1) = x_next(b, state_dim_ + 1) = sa(b, state_dim_ + 1) =
        t.goal.y;
    for (std::size_t k = 0; k < action_dim_; ++k) sa(b, obs + k) = t.action[k];
    reward[b] = t.reward;
    not_done[b] = 1.0 - t.done;
  }

  // Bellman targets from the target networks.
  const Matrix a_next = target_actor_.forward_batch(x_next);
  Matrix sa_next(B, obs + action_dim_);
  for (std::size_t b = 0; b < B; ++b) {
    for (std::size_t k = 0; k < obs; ++k) sa_next(b, k) = x_next(b, k);
    for (std::size_t k = 0; k < action_dim_; ++k)
      sa_next(b, obs + k) = a_next(b, k);
  }
  const Matrix q_next = target_critic_.forward_batch(sa_next);

  // Critic regression.
  Approximator::Tape critic_tape;
  const Matrix q = critic_.forward_batch(sa, &critic_tape);
  Matrix dq(B, 1);
  UpdateStats stats;
  for (std::size_t b = 0; b < B; ++b) {
    const double y = reward[b] + config_.gamma * not_done[b] * q_next(b, 0);
    const double err = q(b, 0) - y;
    stats.critic_loss += err * err / static_cast<double>(B);
    dq(b, 0) = 2.0 * err / static_cast<double>(B);
  }
  std::fill(critic_grad_.begin(), critic_grad_.end(), 0.0);
  critic_.backward(critic_tape, dq, critic_grad_);
  critic_opt_.step(critic_.parameters(), critic_grad_);

  // Actor ascent on Q(s, pi(s)) through the updated critic.
  Approximator::Tape actor_tape, q_tape;
  const Matrix a_pi = actor_.forward_batch(x, &actor_tape);
  Matrix sa_pi = sa;
  for (std::size_t b = 0; b < B; ++b)
    for (std::size_t k = 0; k < action_dim_; ++k) sa_pi(b, obs + k) = a_pi(b, k);
  const Matrix q_pi = critic_.forward_batch(sa_pi, &q_tape);
  Matrix up(B, 1);
  for (std::size_t b = 0; b < B; ++b) {
    stats.actor_objective += q_pi(b, 0) / static_cast<double>(B);
    up(b, 0) = -1.0 / static_cast<double>(B);
  }
  Matrix d_input;
  critic_.backward(q_tape, up, {}, &d_input);
  Matrix d_action(B, action_dim_);
  for (std::size_t b = 0; b < B; ++b)
    for (std::size_t k = 0; k < action_dim_; ++k)
      d_action(b, k) = d_input(b, obs + k);
  std::fill(actor_grad_.begin(), actor_grad_.end(), 0.0);
  actor_.backward(actor_tape, d_action, actor_grad_);
  actor_opt_.step(actor_.parameters(), actor_grad_);

  soft_update_targets();

  require_finite(actor_, "actor");
  require_finite(critic_, "critic");
  require_finite(target_actor_, "target actor");
  require_finite(target_critic_, "target critic");
  if (!std::isfinite(stats.critic_loss) || !std::isfinite(stats.actor_objective))
    throw NumericError("ddpg: non-finite loss");
  return stats;
}

}  // namespace ssadr::ddpg
