#include "ssadr/trainer/evaluation.hpp"

#include "ssadr/ddpg/agent.hpp"
#include "ssadr/envs/scripted.hpp"
#include "ssadr/errors.hpp"

namespace ssadr::trainer {

std::string_view to_string(EvalEnv e) {
  switch (e) {
    case EvalEnv::Default: return "default";
    case EvalEnv::Hard: return "hard";
    case EvalEnv::Explicit: return "explicit";
  }
  return "?";
}

EvalEnv parse_eval_env(std::string_view name) {
  if (name == "default") return EvalEnv::Default;
  if (name == "hard") return EvalEnv::Hard;
  if (name == "explicit") return EvalEnv::Explicit;
  throw ConfigError("unknown eval env '" + std::string(name) +
                    "' (valid: default, hard, explicit)");
}

Policy actor_policy(const approx::Approximator& actor) {
  return [actor](const envs::EnvInstance& env) {
    return ddpg::act_with(actor, env.state(), env.goal(), 0.0, nullptr);
  };
}

Policy zero_policy(envs::EnvKind kind) {
  return [n = envs::EnvInstance::action_dim(kind)](const envs::EnvInstance&) {
    return std::vector<double>(n, 0.0);
  };
}

Policy scripted_policy() {
  return [](const envs::EnvInstance& env) { return envs::scripted_action(env); };
}

std::vector<envs::Point2> evaluation_goals(envs::EnvKind kind, int n,
                                           std::uint64_t eval_seed) {
  Rng rng(eval_seed);
  std::vector<envs::Point2> goals;
  goals.reserve(n);
  for (int i = 0; i < n; ++i) goals.push_back(envs::sample_goal(kind, rng));
  return goals;
}

EvalRecord evaluate(const Policy& policy, const envs::EnvInstance& prototype,
                    int n_episodes, std::uint64_t eval_seed) {
  if (n_episodes < 1) throw ArgumentError("evaluate: n_episodes must be >= 1");
  EvalRecord rec;
  double total = 0.0;
  for (const auto goal :
       evaluation_goals(prototype.kind(), n_episodes, eval_seed)) {
    envs::EnvInstance env = prototype;
    env.reset(goal);
    while (!env.done()) env.step(policy(env));
    const double d = env.distance_to_goal();
    rec.distances.push_back(d);
    total += d;
  }
  rec.mean_final_distance = total / n_episodes;
  return rec;
}

std::uint64_t eval_seed_for(std::uint64_t run_seed) {
  return mix_seed(run_seed ^ 0xe7a1e7a1e7a1ULL);
}

envs::EnvInstance default_eval_env(envs::EnvKind kind, envs::RangeMode range,
                                   int max_steps) {
  const auto space = envs::RandomizationSpace::for_env(kind, range);
  return {kind, space.reference(), max_steps};
}

envs::EnvInstance hard_eval_env(envs::EnvKind kind, int max_steps) {
  return envs::make_env(envs::hard_env_params(kind), max_steps);
}

}  // namespace ssadr::trainer
