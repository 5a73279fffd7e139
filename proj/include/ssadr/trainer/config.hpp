#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "ssadr/adr/discriminator.hpp"
#include "ssadr/adr/svpg.hpp"
#include "ssadr/ddpg/agent.hpp"
#include "ssadr/envs/randomization_space.hpp"
#include "ssadr/selfplay/episode.hpp"
#include "ssadr/selfplay/stopping_policy.hpp"

namespace ssadr::trainer {

enum class Algo { SsAdr, Udr, UnsupDefault, AdrDisc };

std::string_view to_string(Algo a);
// Throws ConfigError listing the valid names.
Algo parse_algo(std::string_view name);

struct RunConfig {
  Algo algo = Algo::SsAdr;
  envs::EnvKind env = envs::EnvKind::Pusher;
  envs::RangeMode range = envs::RangeMode::Calibrated;
  std::uint64_t seed = 0;

  long total_timesteps = 200000;  // Bob steps
  long eval_interval = 5000;
  int eval_episodes = 20;
  int max_episode_steps = 100;
  long warmup_steps = 1000;
  long loss_interval = 1000;
  std::size_t replay_capacity = 100000;

  double upsilon = 0.2;
  ddpg::DdpgConfig ddpg;
  selfplay::StoppingPolicyConfig stopping;
  double alice_sigma = 0.1;
  // Alice's transitions toward her intent goal join Bob's replay buffer.
  bool alice_transitions_to_replay = true;
  // Self-play regimes: extra goal rollouts for Bob after each self-play
  // episode, in Bob's environment, with evaluation-region goals.
  int goal_rollouts = 0;
  adr::SvpgConfig svpg;
  adr::DiscriminatorConfig discriminator;

  // udr: draw a fresh evaluation-region goal every episode instead of the
  // canonical one.
  bool udr_uniform_goals = false;
  // unsup_default: reward written into Bob's transitions.
  selfplay::BobReward unsup_bob_reward = selfplay::BobReward::Environment;

  std::string output_dir;

  // Throws ConfigError describing the first violated constraint.
  void validate() const;
};

// Number of evaluations per evaluation environment over a run.
long planned_evaluations(const RunConfig& cfg);

}  // namespace ssadr::trainer
