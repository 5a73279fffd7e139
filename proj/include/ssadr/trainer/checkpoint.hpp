#pragma once

#include <optional>
#include <string>

#include "ssadr/approx/approximator.hpp"
#include "ssadr/envs/randomization_space.hpp"
#include "ssadr/trainer/config.hpp"
#include "ssadr/trainer/evaluation.hpp"

namespace ssadr::trainer {

enum class PolicyKind { Network, Oracle };

// A directory holding `manifest` and, for network policies, `actor`:
//
//   ssadr-checkpoint 1
//   env <reacher|pusher>
//   algo <name>
//   policy <network|oracle>
//   status <final|diagnostic>
//   timestep <n>
//   end
struct Checkpoint {
  envs::EnvKind env = envs::EnvKind::Pusher;
  Algo algo = Algo::SsAdr;
  PolicyKind policy = PolicyKind::Network;
  bool diagnostic = false;
  long timestep = 0;
  std::optional<approx::Approximator> actor;
};

void save_checkpoint(const std::string& dir, const Checkpoint& c);
// Throws ConfigError when the directory is missing or malformed, or when a
// network policy's actor does not fit the environment's dimensions.
Checkpoint load_checkpoint(const std::string& dir);

Policy checkpoint_policy(const Checkpoint& c);

}  // namespace ssadr::trainer
