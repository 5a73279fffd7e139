#include "ssadr/trainer/config.hpp"

#include <array>
#include <utility>

#include "ssadr/errors.hpp"

namespace ssadr::trainer {

namespace {

constexpr std::array<std::pair<Algo, std::string_view>, 4> kAlgoNames{{
    {Algo::SsAdr, "ssadr"},
    {Algo::Udr, "udr"},
    {Algo::UnsupDefault, "unsup_default"},
    {Algo::AdrDisc, "adr_disc"},
}};

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

}  // namespace

std::string_view to_string(Algo a) {
  for (const auto& [k, name] : kAlgoNames)
    if (k == a) return name;
  return "?";
}

Algo parse_algo(std::string_view name) {
  std::string valid;
  for (const auto& [k, n] : kAlgoNames) {
    if (n == name) return k;
    valid += valid.empty() ? "" : ", ";
    valid += n;
  }
  throw ConfigError("unknown algo '" + std::string(name) +
                    "' (valid: " + valid + ")");
}

void RunConfig::validate() const {
  require(total_timesteps > 0, "total_timesteps must be positive");
  require(eval_interval > 0, "eval_interval must be positive");
  require(total_timesteps % eval_interval == 0,
          "eval_interval must divide total_timesteps");
  require(eval_episodes >= 1, "eval_episodes must be at least 1");
  require(max_episode_steps >= 1, "max_episode_steps must be at least 1");
  require(warmup_steps >= 0, "warmup_steps must be non-negative");
  require(loss_interval > 0, "loss_interval must be positive");
  require(replay_capacity >= 1, "replay_capacity must be at least 1");
  require(upsilon >= 0.0, "upsilon must be non-negative");
  require(ddpg.gamma >= 0.0 && ddpg.gamma <= 1.0, "gamma must be in [0, 1]");
  require(ddpg.tau > 0.0 && ddpg.tau <= 1.0, "tau must be in (0, 1]");
  require(ddpg.actor_lr > 0.0, "actor learning rate must be positive");
  require(ddpg.critic_lr > 0.0, "critic learning rate must be positive");
  require(ddpg.exploration_sigma >= 0.0,
          "exploration sigma must be non-negative");
  require(ddpg.batch_size >= 1, "batch_size must be at least 1");
  require(stopping.learning_rate > 0.0,
          "stopping policy learning rate must be positive");
  require(stopping.baseline_rate > 0.0 && stopping.baseline_rate <= 1.0,
          "stopping baseline rate must be in (0, 1]");
  require(alice_sigma >= 0.0, "alice sigma must be non-negative");
  require(goal_rollouts >= 0, "goal rollouts must be non-negative");
  require(svpg.n_particles >= 1, "svpg particles must be at least 1");
  require(svpg.learning_rate > 0.0, "svpg learning rate must be positive");
  require(svpg.temperature >= 0.0, "svpg temperature must be non-negative");
  require(svpg.proposal_sigma > 0.0, "svpg proposal sigma must be positive");
  require(svpg.episodes_per_particle >= 1,
          "svpg episodes_per_particle must be at least 1");
  require(svpg.bandwidth_mode != adr::BandwidthMode::Fixed ||
              svpg.fixed_bandwidth > 0.0,
          "svpg fixed bandwidth must be positive");
  require(discriminator.learning_rate > 0.0,
          "discriminator learning rate must be positive");
}

long planned_evaluations(const RunConfig& cfg) {
  cfg.validate();
  return cfg.total_timesteps / cfg.eval_interval;
}

}  // namespace ssadr::trainer
