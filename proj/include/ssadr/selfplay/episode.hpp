#pragma once

#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "ssadr/approx/approximator.hpp"
#include "ssadr/ddpg/replay_buffer.hpp"
#include "ssadr/envs/env.hpp"
#include "ssadr/rng.hpp"
#include "ssadr/selfplay/stopping_policy.hpp"

namespace ssadr::selfplay {

// Reward written into Bob's transitions.
enum class BobReward {
  Environment,  // -distance to s*, the environment's own reward
  SelfPlay,     // -upsilon per step, summing to -upsilon * t_b
};

struct SelfPlayOutcome {
  int t_a = 0;
  int t_b = 0;
  envs::Point2 target;  // s*
  double alice_reward = 0.0;
  double bob_reward = 0.0;  // -upsilon * t_b
  bool bob_success = false;
  // Bob's phase was cut short by the step budget; t_b is then the number of
  // steps actually taken and the outcome should not be learned from.
  bool truncated = false;
  std::vector<double> stop_log_probs;
  std::vector<StopDecision> decisions;
};

struct SelfPlayOptions {
  double upsilon = 0.2;
  double alice_sigma = 0.1;  // exploration noise on Alice's acting policy
  // Alice takes uniform random actions instead, mirroring Bob's warmup.
  bool alice_uniform_actions = false;
  // When set, Alice's own transitions (goal = her intent, environment reward)
  // are stored here too.
  ddpg::ReplayBuffer* alice_buffer = nullptr;
  BobReward bob_reward = BobReward::Environment;
  int bob_step_budget = std::numeric_limits<int>::max();
};

using BobPolicy = std::function<std::vector<double>(
    std::span<const double> state, envs::Point2 goal)>;
using BobStepHook = std::function<void()>;

// One round of asymmetric self-play.
//
// Alice resets env_ref toward `alice_intent` and acts with `alice_actor`
// (state + intent as its goal input). Before each of her actions the
// stopping policy samples STOP from (s_0, s_t); STOP is forced at her last
// step. s* is the point she achieved when stopping. Bob then resets env_rand
// to the same initial layout with goal s* and acts until success or
// max_steps; a failure counts as t_b = max_steps. Each of Bob's transitions
// goes into `bob_buffer` and `on_bob_step` runs after every Bob step.
SelfPlayOutcome run_selfplay_episode(
    const approx::Approximator& alice_actor, const StoppingPolicy& stopping,
    const BobPolicy& bob, ddpg::ReplayBuffer& bob_buffer,
    envs::EnvInstance& env_ref, envs::EnvInstance& env_rand,
    envs::Point2 alice_intent, const SelfPlayOptions& options, Rng& rng,
    const BobStepHook& on_bob_step = {});

// Loss after one REINFORCE step on the outcome's decisions.
double update_stopping_policy(StoppingPolicy& stopping,
                              const SelfPlayOutcome& outcome);

}  // namespace ssadr::selfplay
