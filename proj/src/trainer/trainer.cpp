#include "ssadr/trainer/trainer.hpp"

#include <cmath>
#include <filesystem>
#include <optional>
#include <stdexcept>

#include "ssadr/adr/discriminator.hpp"
#include "ssadr/errors.hpp"
#include "ssadr/selfplay/episode.hpp"
#include "ssadr/selfplay/rewards.hpp"
#include "ssadr/trainer/checkpoint.hpp"

namespace ssadr::trainer {

void TeeSink::on_eval(const EvalRecord& r) {
  for (auto* s : sinks_) s->on_eval(r);
}
void TeeSink::on_selfplay(const SelfPlayRecord& r) {
  for (auto* s : sinks_) s->on_selfplay(r);
}
void TeeSink::on_sample(const SampleRecord& r) {
  for (auto* s : sinks_) s->on_sample(r);
}
void TeeSink::on_loss(const LossRecord& r) {
  for (auto* s : sinks_) s->on_loss(r);
}

namespace {

enum Stream : std::uint64_t {
  kActorInit = 1,
  kStoppingInit,
  kDiscriminatorInit,
  kParticleInit,
  kParticleSample,
  kGoals,
  kExplore,
  kReplay,
  kAlice,
  kUniformParams,
};

void require_finite(double v, const char* what) {
  if (!std::isfinite(v))
    throw NumericError(std::string("non-finite ") + what);
}

struct Rollout {
  std::vector<ddpg::Transition> transitions;
  bool success = false;
  bool truncated = false;
};

// State shared by every regime: Bob's learner, the step counter and the
// evaluation schedule.
class Run {
 public:
  Run(const RunConfig& cfg, MetricsSink& sink)
      : cfg_(cfg),
        sink_(sink),
        space_(envs::RandomizationSpace::for_env(cfg.env, cfg.range)),
        init_rng_(make_stream(cfg.seed, kActorInit)),
        agent_(envs::EnvInstance::state_dim(cfg.env),
               envs::EnvInstance::action_dim(cfg.env), cfg.ddpg, init_rng_),
        buffer_(cfg.replay_capacity),
        default_env_(default_eval_env(cfg.env, cfg.range, cfg.max_episode_steps)),
        hard_env_(hard_eval_env(cfg.env, cfg.max_episode_steps)),
        eval_seed_(eval_seed_for(cfg.seed)),
        explore_rng_(make_stream(cfg.seed, kExplore)),
        replay_rng_(make_stream(cfg.seed, kReplay)),
        goal_rng_(make_stream(cfg.seed, kGoals)) {}

  const RunConfig& cfg() const { return cfg_; }
  MetricsSink& sink() { return sink_; }
  const envs::RandomizationSpace& space() const { return space_; }
  ddpg::DdpgAgent& agent() { return agent_; }
  ddpg::ReplayBuffer& buffer() { return buffer_; }
  Rng& goal_rng() { return goal_rng_; }
  long steps() const { return steps_; }
  long remaining() const { return cfg_.total_timesteps - steps_; }
  bool finished() const { return steps_ >= cfg_.total_timesteps; }
  RewardChecks& checks() { return checks_; }

  envs::EnvInstance reference_env() const {
    return envs::make_env(space_, space_.reference_params(), cfg_.env,
                          cfg_.max_episode_steps);
  }

  // Uniform random during warmup, then the actor with exploration noise.
  std::vector<double> bob_action(std::span<const double> state,
                                 envs::Point2 goal) {
    if (steps_ < cfg_.warmup_steps) {
      std::vector<double> a(agent_.action_dim());
      for (double& v : a) v = 2.0 * uniform01(explore_rng_) - 1.0;
      return a;
    }
    return agent_.act(state, goal, true, explore_rng_);
  }

  selfplay::BobPolicy bob_policy() {
    return [this](std::span<const double> s, envs::Point2 g) {
      return bob_action(s, g);
    };
  }

  // Runs after every Bob step that lands in the replay buffer.
  void after_bob_step() {
    ++steps_;
    if (steps_ > cfg_.warmup_steps) {
      if (auto st = agent_.update(buffer_, cfg_.ddpg.batch_size, replay_rng_)) {
        require_finite(st->critic_loss, "critic loss");
        require_finite(st->actor_objective, "actor objective");
        critic_loss_ = st->critic_loss;
        actor_objective_ = st->actor_objective;
      }
    }
    if (steps_ % cfg_.loss_interval == 0) emit_losses();
    if (steps_ % cfg_.eval_interval == 0) run_evaluations();
  }

  void set_loss(const std::string& component, double v) {
    require_finite(v, component.c_str());
    for (auto& [name, value] : extra_losses_)
      if (name == component) {
        value = v;
        return;
      }
    extra_losses_.emplace_back(component, v);
  }

  // Bob acting alone in `env` toward `goal`. Training rollouts write to the
  // replay buffer and count against the budget; others are side rollouts.
  Rollout rollout(envs::EnvInstance& env, envs::Point2 goal, bool training) {
    Rollout out;
    std::vector<double> state = env.reset(goal);
    int limit = env.max_steps();
    if (training && remaining() < limit) limit = static_cast<int>(remaining());
    for (int t = 0; t < limit; ++t) {
      auto action = bob_action(state, goal);
      envs::StepResult r = env.step(action);
      ddpg::Transition tr;
      tr.state = std::move(state);
      tr.action = std::move(action);
      tr.reward = r.reward;
      tr.next_state = r.next_state;
      tr.done = r.success ? 1.0 : 0.0;
      tr.goal = goal;
      state = std::move(r.next_state);
      if (training) buffer_.push(tr);
      out.transitions.push_back(std::move(tr));
      if (training) after_bob_step();
      if (r.success) {
        out.success = true;
        break;
      }
      if (r.done) break;
    }
    out.truncated = !out.success &&
                    static_cast<int>(out.transitions.size()) < env.max_steps();
    return out;
  }

  void check_bob_reward(int t_b) {
    ++checks_.bob_checked;
    if (!(selfplay::bob_selfplay_reward(t_b, cfg_.upsilon) <= 0.0)) {
      ++checks_.violations;
      throw std::logic_error("bob self-play reward is positive");
    }
  }

  void check_alice_reward(double r_a) {
    ++checks_.alice_checked;
    if (!(r_a >= 0.0)) {
      ++checks_.violations;
      throw std::logic_error("alice reward is negative");
    }
  }

  void write_diagnostic() {
    if (cfg_.output_dir.empty()) return;
    Checkpoint c;
    c.env = cfg_.env;
    c.algo = cfg_.algo;
    c.diagnostic = true;
    c.timestep = steps_;
    c.actor = agent_.actor();
    save_checkpoint(
        (std::filesystem::path(cfg_.output_dir) / "checkpoints" / "diagnostic")
            .string(),
        c);
  }

 private:
  void emit_losses() {
    if (critic_loss_) {
      sink_.on_loss({steps_, "critic", *critic_loss_});
      sink_.on_loss({steps_, "actor", *actor_objective_});
    }
    for (const auto& [name, value] : extra_losses_)
      sink_.on_loss({steps_, name, value});
  }

  void run_evaluations() {
    const Policy policy = actor_policy(agent_.actor());
    for (auto [kind, env] : {std::pair{EvalEnv::Default, &default_env_},
                             std::pair{EvalEnv::Hard, &hard_env_}}) {
      EvalRecord rec = evaluate(policy, *env, cfg_.eval_episodes, eval_seed_);
      require_finite(rec.mean_final_distance, "evaluation distance");
      rec.timestep = steps_;
      rec.eval_env = kind;
      rec.seed = cfg_.seed;
      rec.algo = cfg_.algo;
      sink_.on_eval(rec);
    }
  }

  const RunConfig& cfg_;
  MetricsSink& sink_;
  envs::RandomizationSpace space_;
  Rng init_rng_;
  ddpg::DdpgAgent agent_;
  ddpg::ReplayBuffer buffer_;
  envs::EnvInstance default_env_;
  envs::EnvInstance hard_env_;
  std::uint64_t eval_seed_;
  Rng explore_rng_;
  Rng replay_rng_;
  Rng goal_rng_;
  long steps_ = 0;
  std::optional<double> critic_loss_;
  std::optional<double> actor_objective_;
  std::vector<std::pair<std::string, double>> extra_losses_;
  RewardChecks checks_;
};

// Round-robin particle use with one interacting update per full batch.
class ParticleBank {
 public:
  ParticleBank(const RunConfig& cfg, std::size_t dims)
      : cfg_(cfg.svpg),
        init_rng_(make_stream(cfg.seed, kParticleInit)),
        sample_rng_(make_stream(cfg.seed, kParticleSample)),
        particles_(adr::make_particles(dims, cfg_, init_rng_)),
        batches_(particles_.size()) {}

  std::size_t next_index() const { return cursor_ % particles_.size(); }

  adr::ParticleSample sample() {
    return adr::sample_params(particles_[next_index()], sample_rng_);
  }

  void record(const adr::ParticleSample& s, double reward) {
    batches_[next_index()].push_back({s.params, s.score, reward});
    ++cursor_;
    if (cursor_ % (particles_.size() * cfg_.episodes_per_particle) == 0)
      update();
  }

  std::vector<adr::Particle>& particles() { return particles_; }

 private:
  void update() {
    std::vector<std::vector<double>> grads;
    for (std::size_t i = 0; i < particles_.size(); ++i) {
      auto g = adr::estimate_grad_J(particles_[i], batches_[i]);
      double mean = 0.0;
      for (const auto& e : batches_[i]) mean += e.reward;
      if (!batches_[i].empty()) mean /= static_cast<double>(batches_[i].size());
      particles_[i].set_return_estimate(mean);
      grads.push_back(g ? std::move(*g)
                        : std::vector<double>(particles_[i].location().size()));
      batches_[i].clear();
    }
    adr::svpg_update(particles_, grads, cfg_);
    for (const auto& p : particles_)
      for (double v : p.location()) require_finite(v, "particle location");
  }

  adr::SvpgConfig cfg_;
  Rng init_rng_;
  Rng sample_rng_;
  std::vector<adr::Particle> particles_;
  std::vector<std::vector<adr::ParticleEpisode>> batches_;
  std::size_t cursor_ = 0;
};

SampleRecord sample_record(long t, int particle, const envs::EnvParams& p,
                           const envs::RandomizationSpace& space) {
  return {t, particle, p.values(), space.denormalize(p)};
}

TrainResult finish(Run& run, long alice_steps, long ref_steps, long episodes,
                   std::vector<adr::Particle> particles) {
  return TrainResult{run.agent(),       run.steps(), alice_steps, ref_steps,
                     episodes,          run.checks(), std::move(particles)};
}

template <typename Body>
TrainResult guarded(const RunConfig& cfg, MetricsSink& sink, Body body) {
  cfg.validate();
  Run run(cfg, sink);
  try {
    return body(run);
  } catch (const NumericError&) {
    run.write_diagnostic();
    throw;
  }
}

// Self-play loop shared by ssadr (particles) and unsup_default (none).
TrainResult selfplay_loop(Run& run, bool use_particles) {
  const RunConfig& cfg = run.cfg();
  Rng stop_init = make_stream(cfg.seed, kStoppingInit);
  selfplay::StoppingPolicy stopping(envs::EnvInstance::state_dim(cfg.env),
                                    cfg.stopping, stop_init);
  Rng alice_rng = make_stream(cfg.seed, kAlice);
  std::optional<ParticleBank> bank;
  if (use_particles) bank.emplace(cfg, run.space().n_dims());

  envs::EnvInstance env_ref = run.reference_env();
  const selfplay::BobPolicy bob = run.bob_policy();
  long alice_steps = 0;
  long episodes = 0;
  while (!run.finished()) {
    const approx::Approximator alice_actor = run.agent().actor();
    std::optional<adr::ParticleSample> sample;
    int particle = -1;
    envs::EnvInstance env_rand = env_ref;
    if (bank) {
      particle = static_cast<int>(bank->next_index());
      sample = bank->sample();
      run.sink().on_sample(
          sample_record(run.steps(), particle, sample->params, run.space()));
      env_rand = envs::make_env(run.space(), sample->params, cfg.env,
                                cfg.max_episode_steps);
    }
    const envs::Point2 intent = envs::sample_goal(cfg.env, run.goal_rng());
    selfplay::SelfPlayOptions opts;
    opts.upsilon = cfg.upsilon;
    opts.alice_sigma = cfg.alice_sigma;
    opts.alice_uniform_actions = run.steps() < cfg.warmup_steps;
    if (cfg.alice_transitions_to_replay) opts.alice_buffer = &run.buffer();
    opts.bob_reward = bank ? selfplay::BobReward::Environment
                           : cfg.unsup_bob_reward;
    opts.bob_step_budget = static_cast<int>(
        std::min<long>(run.remaining(), cfg.max_episode_steps));
    const auto out = selfplay::run_selfplay_episode(
        alice_actor, stopping, bob, run.buffer(), env_ref, env_rand, intent,
        opts, alice_rng, [&run] { run.after_bob_step(); });
    alice_steps += out.t_a;
    if (out.truncated) break;
    ++episodes;
    run.check_alice_reward(out.alice_reward);
    run.check_bob_reward(out.t_b);
    run.sink().on_selfplay(
        {run.steps(), out.t_a, out.t_b, out.alice_reward, particle});
    if (!out.decisions.empty())
      run.set_loss("stopping", selfplay::update_stopping_policy(stopping, out));
    if (bank) bank->record(*sample, out.alice_reward);
    for (int k = 0; k < cfg.goal_rollouts && !run.finished(); ++k) {
      const Rollout r =
          run.rollout(env_rand, envs::sample_goal(cfg.env, run.goal_rng()), true);
      if (r.truncated) break;
      run.check_bob_reward(static_cast<int>(
          r.success ? r.transitions.size() : cfg.max_episode_steps));
    }
  }
  return finish(run, alice_steps, 0, episodes,
                bank ? bank->particles() : std::vector<adr::Particle>{});
}

}  // namespace

TrainResult train_ssadr(const RunConfig& cfg, MetricsSink& sink) {
  return guarded(cfg, sink, [](Run& run) { return selfplay_loop(run, true); });
}

TrainResult train_unsup_default(const RunConfig& cfg, MetricsSink& sink) {
  return guarded(cfg, sink, [](Run& run) { return selfplay_loop(run, false); });
}

TrainResult train_udr(const RunConfig& cfg, MetricsSink& sink) {
  return guarded(cfg, sink, [](Run& run) {
    const RunConfig& c = run.cfg();
    Rng param_rng = make_stream(c.seed, kUniformParams);
    long episodes = 0;
    while (!run.finished()) {
      std::vector<double> xi(run.space().n_dims());
      for (double& v : xi) v = uniform01(param_rng);
      const envs::EnvParams params(std::move(xi));
      run.sink().on_sample(sample_record(run.steps(), -1, params, run.space()));
      envs::EnvInstance env =
          envs::make_env(run.space(), params, c.env, c.max_episode_steps);
      const envs::Point2 goal = c.udr_uniform_goals
                                    ? envs::sample_goal(c.env, run.goal_rng())
                                    : envs::canonical_goal(c.env);
      const Rollout r = run.rollout(env, goal, true);
      if (r.truncated) break;
      ++episodes;
      run.check_bob_reward(static_cast<int>(
          r.success ? r.transitions.size() : c.max_episode_steps));
    }
    return finish(run, 0, 0, episodes, {});
  });
}

TrainResult train_adr_disc(const RunConfig& cfg, MetricsSink& sink) {
  return guarded(cfg, sink, [](Run& run) {
    const RunConfig& c = run.cfg();
    const std::size_t sd = envs::EnvInstance::state_dim(c.env);
    const std::size_t ad = envs::EnvInstance::action_dim(c.env);
    Rng disc_init = make_stream(c.seed, kDiscriminatorInit);
    adr::Discriminator disc(adr::feature_length(sd, ad), c.discriminator,
                            disc_init);
    ParticleBank bank(c, run.space().n_dims());
    envs::EnvInstance env_ref = run.reference_env();
    long ref_steps = 0;
    long episodes = 0;
    while (!run.finished()) {
      const int particle = static_cast<int>(bank.next_index());
      const adr::ParticleSample sample = bank.sample();
      run.sink().on_sample(
          sample_record(run.steps(), particle, sample.params, run.space()));
      envs::EnvInstance env_rand =
          envs::make_env(run.space(), sample.params, c.env, c.max_episode_steps);
      const envs::Point2 goal = envs::sample_goal(c.env, run.goal_rng());
      const Rollout rand = run.rollout(env_rand, goal, true);
      if (rand.truncated) break;
      ++episodes;
      run.check_bob_reward(static_cast<int>(
          rand.success ? rand.transitions.size() : c.max_episode_steps));
      const Rollout ref = run.rollout(env_ref, goal, false);
      ref_steps += static_cast<long>(ref.transitions.size());
      const std::vector<std::vector<double>> f_rand{
          adr::featurize_trajectory(rand.transitions, sd, ad)};
      const std::vector<std::vector<double>> f_ref{
          adr::featurize_trajectory(ref.transitions, sd, ad)};
      const double reward = adr::discriminator_reward(disc, f_rand[0]);
      if (!(reward <= 0.0))
        throw std::logic_error("discriminator reward is positive");
      run.set_loss("discriminator", adr::train_discriminator(disc, f_ref, f_rand));
      bank.record(sample, reward);
    }
    return finish(run, 0, ref_steps, episodes, bank.particles());
  });
}

TrainResult train(const RunConfig& cfg, MetricsSink& sink) {
  switch (cfg.algo) {
    case Algo::SsAdr: return train_ssadr(cfg, sink);
    case Algo::Udr: return train_udr(cfg, sink);
    case Algo::UnsupDefault: return train_unsup_default(cfg, sink);
    case Algo::AdrDisc: return train_adr_disc(cfg, sink);
  }
  throw ConfigError("unknown algo");
}

}  // namespace ssadr::trainer
