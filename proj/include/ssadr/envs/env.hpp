#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ssadr/envs/randomization_space.hpp"
#include "ssadr/rng.hpp"

namespace ssadr::envs {

inline constexpr int kDefaultMaxSteps = 100;
inline constexpr double kGoalThreshold = 0.025;

// Reacher: planar chain of four links hinged at the origin.
inline constexpr int kReacherLinks = 4;
inline constexpr double kLinkLength = 0.1;
inline constexpr double kReacherReach = kReacherLinks * kLinkLength;

// Pusher: point agent and puck on the unit square.
inline constexpr double kPusherAgentSpeed = 0.05;
inline constexpr double kPusherContactRadius = 0.08;
// Pusher success also needs the puck at rest: speed per step below this.
inline constexpr double kPuckRestSpeed = 0.002;

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point2&, const Point2&) = default;
};

double distance(Point2 a, Point2 b);

struct StepResult {
  std::vector<double> next_state;
  double reward = 0.0;
  bool done = false;
  bool success = false;
};

// Parameters of an evaluation environment that lies outside the training box.
// Carried in physical units because no normalized coordinate exists for them.
struct HardParams {
  EnvKind kind;
  std::vector<double> physical;
};

HardParams hard_env_params(EnvKind kind);

// A goal-directed episodic MDP. Deterministic: the same parameters, goal and
// action sequence always produce bit-identical trajectories.
//
// State layouts (both length 8):
//   Reacher: theta_1..theta_4, end-effector x y, goal x y
//   Pusher:  agent x y, puck x y, puck velocity x y, goal x y
class EnvInstance {
 public:
  EnvInstance(EnvKind kind, std::vector<double> physical,
              int max_steps = kDefaultMaxSteps);

  static constexpr std::size_t state_dim(EnvKind) { return 8; }
  static constexpr std::size_t action_dim(EnvKind kind) {
    return kind == EnvKind::Reacher ? 4 : 2;
  }
  static constexpr std::size_t goal_dim() { return 2; }

  std::size_t state_dim() const { return state_dim(kind_); }
  std::size_t action_dim() const { return action_dim(kind_); }

  // Initial layout is fixed; only the goal varies. Throws ArgumentError if
  // the goal is outside the reachable region.
  const std::vector<double>& reset(Point2 goal);
  StepResult step(std::span<const double> action);

  // Overwrite the full state (same layout as state()). Resets the step
  // counter to `step_count`.
  void restore(std::span<const double> state, int step_count = 0);

  double distance_to_goal() const;
  // Success predicate: achieved point within kGoalThreshold of the goal and,
  // for the pusher, the puck at rest.
  bool at_goal() const;
  Point2 achieved_point() const;

  EnvKind kind() const { return kind_; }
  const std::vector<double>& physical_params() const { return physical_; }
  const std::vector<double>& state() const { return state_; }
  Point2 goal() const { return goal_; }
  int step_count() const { return step_count_; }
  int max_steps() const { return max_steps_; }
  bool done() const { return done_; }

 private:
  void step_reacher(std::span<const double> action);
  void step_pusher(std::span<const double> action);
  void sync_reacher_tip();

  EnvKind kind_;
  std::vector<double> physical_;
  std::vector<double> state_;
  Point2 goal_{};
  int step_count_ = 0;
  int max_steps_;
  bool done_ = false;
};

// S: params -> MDP. Throws ConfigError if dimensions disagree.
EnvInstance make_env(const RandomizationSpace& space, const EnvParams& params,
                     EnvKind kind, int max_steps = kDefaultMaxSteps);
EnvInstance make_env(const HardParams& hard, int max_steps = kDefaultMaxSteps);

// Reacher: disk of radius kReacherReach about the base. Pusher: unit square.
bool in_reachable_region(EnvKind kind, Point2 goal);

// Uniform over the evaluation goal region, a subset of the reachable region:
// Reacher: annulus 0.1 <= r <= 0.35 over the front half-plane.
// Pusher: the square [0.5, 0.9] x [0.3, 0.7] in front of the puck.
Point2 sample_goal(EnvKind kind, Rng& rng);

// Fixed goal used when a regime keeps the goal constant.
Point2 canonical_goal(EnvKind kind);

// Forward kinematics of the reacher chain.
Point2 reacher_tip(std::span<const double> joint_angles);

}  // namespace ssadr::envs
