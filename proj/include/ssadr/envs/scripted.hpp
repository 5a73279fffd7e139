#pragma once

#include <vector>

#include "ssadr/envs/env.hpp"

namespace ssadr::envs {

// Hand-written controllers with full knowledge of the instance's physics.
// They serve as oracles for test fixtures and for locating hard parameters.
//
// Reacher: solves inverse kinematics for the goal and drives each joint
// toward its target angle, compensating for damping.
// Pusher: lines up behind the puck, then pushes it straight at the goal with
// speed proportional to the remaining distance (one tenth of it per step).
std::vector<double> scripted_action(const EnvInstance& env);

}  // namespace ssadr::envs
