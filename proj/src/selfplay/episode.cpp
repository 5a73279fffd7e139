#include "ssadr/selfplay/episode.hpp"

#include <algorithm>

#include "ssadr/ddpg/agent.hpp"
#include "ssadr/errors.hpp"
#include "ssadr/selfplay/rewards.hpp"

namespace ssadr::selfplay {

SelfPlayOutcome run_selfplay_episode(
    const approx::Approximator& alice_actor, const StoppingPolicy& stopping,
    const BobPolicy& bob, ddpg::ReplayBuffer& bob_buffer,
    envs::EnvInstance& env_ref, envs::EnvInstance& env_rand,
    envs::Point2 alice_intent, const SelfPlayOptions& options, Rng& rng,
    const BobStepHook& on_bob_step) {
  if (env_ref.kind() != env_rand.kind())
    throw ArgumentError("self-play environments must be the same kind");
  SelfPlayOutcome out;

  // Alice: set a task in the reference environment.
  const std::vector<double> s0 = env_ref.reset(alice_intent);
  const int alice_limit = env_ref.max_steps();
  while (true) {
    ++out.t_a;
    const std::vector<double> st = env_ref.state();
    if (out.t_a == alice_limit) break;  // forced STOP
    StopDecision d = stopping.decide(s0, st, rng);
    out.stop_log_probs.push_back(d.log_prob);
    const bool stop = d.stop;
    out.decisions.push_back(std::move(d));
    if (stop) break;
    std::vector<double> action;
    if (options.alice_uniform_actions) {
      action.resize(env_ref.action_dim());
      for (double& v : action) v = 2.0 * uniform01(rng) - 1.0;
    } else {
      action = ddpg::act_with(alice_actor, st, alice_intent,
                              options.alice_sigma, &rng);
    }
    envs::StepResult r = env_ref.step(action);
    if (options.alice_buffer) {
      ddpg::Transition t;
      t.state = st;
      t.action = std::move(action);
      t.reward = r.reward;
      t.next_state = std::move(r.next_state);
      t.done = r.success ? 1.0 : 0.0;
      t.goal = alice_intent;
      options.alice_buffer->push(std::move(t));
    }
    if (r.done) {
      ++out.t_a;
      break;
    }
  }
  out.target = env_ref.achieved_point();

  // Bob: reproduce it in the randomized environment.
  std::vector<double> state = env_rand.reset(out.target);
  const int bob_limit = std::min(env_rand.max_steps(), options.bob_step_budget);
  while (out.t_b < bob_limit) {
    ++out.t_b;
    auto action = bob(state, out.target);
    envs::StepResult r = env_rand.step(action);
    ddpg::Transition t;
    t.state = std::move(state);
    t.action = std::move(action);
    t.reward = options.bob_reward == BobReward::Environment ? r.reward
                                                             : -options.upsilon;
    t.next_state = r.next_state;
    t.done = r.success ? 1.0 : 0.0;
    t.goal = out.target;
    bob_buffer.push(std::move(t));
    state = std::move(r.next_state);
    if (on_bob_step) on_bob_step();
    if (r.success) {
      out.bob_success = true;
      break;
    }
    if (r.done) break;
  }
  out.truncated = !out.bob_success && out.t_b < env_rand.max_steps();
  if (!out.bob_success && !out.truncated) out.t_b = env_rand.max_steps();

  out.alice_reward = alice_reward(out.t_a, out.t_b, options.upsilon);
  out.bob_reward = bob_selfplay_reward(out.t_b, options.upsilon);
  return out;
}

double update_stopping_policy(StoppingPolicy& stopping,
                              const SelfPlayOutcome& outcome) {
  return stopping.update(outcome.decisions, outcome.alice_reward);
}

}  // namespace ssadr::selfplay
