#pragma once

#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

#include "ssadr/approx/approximator.hpp"
#include "ssadr/envs/env.hpp"
#include "ssadr/trainer/config.hpp"

namespace ssadr::trainer {

// Explicit covers hand-picked parameters evaluated from the command line.
enum class EvalEnv { Default, Hard, Explicit };

std::string_view to_string(EvalEnv e);
EvalEnv parse_eval_env(std::string_view name);

struct EvalRecord {
  long timestep = 0;
  EvalEnv eval_env = EvalEnv::Default;
  double mean_final_distance = 0.0;
  std::vector<double> distances;
  std::uint64_t seed = 0;
  Algo algo = Algo::SsAdr;
};

// Deterministic controller. Sees the whole instance so that oracle
// controllers can read the physics; learned policies use state and goal only.
using Policy = std::function<std::vector<double>(const envs::EnvInstance&)>;

Policy actor_policy(const approx::Approximator& actor);
Policy zero_policy(envs::EnvKind kind);
Policy scripted_policy();

// Goals used by every evaluation seeded with `eval_seed`.
std::vector<envs::Point2> evaluation_goals(envs::EnvKind kind, int n,
                                           std::uint64_t eval_seed);

// Rolls `policy` on copies of `prototype`, one episode per evaluation goal,
// and records the final distance to goal of each. Throws ArgumentError if
// n_episodes < 1.
EvalRecord evaluate(const Policy& policy, const envs::EnvInstance& prototype,
                    int n_episodes, std::uint64_t eval_seed);

// Seed of the evaluation goal set for a run seed; shared by all regimes.
std::uint64_t eval_seed_for(std::uint64_t run_seed);

envs::EnvInstance default_eval_env(envs::EnvKind kind, envs::RangeMode range,
                                   int max_steps);
envs::EnvInstance hard_eval_env(envs::EnvKind kind, int max_steps);

}  // namespace ssadr::trainer
