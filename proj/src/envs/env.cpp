#include "ssadr/envs/env.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ssadr/errors.hpp"

namespace ssadr::envs {

namespace {

// Pusher state offsets.
constexpr std::size_t kAgent = 0;
constexpr std::size_t kPuck = 2;
constexpr std::size_t kPuckVel = 4;
constexpr std::size_t kGoal = 6;

// Reacher state offsets.
constexpr std::size_t kTip = 4;

constexpr Point2 kPusherAgentStart{0.2, 0.5};
constexpr Point2 kPusherPuckStart{0.4, 0.5};

}  // namespace

double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

Point2 reacher_tip(std::span<const double> joint_angles) {
  Point2 tip{};
  double heading = 0.0;
  for (int j = 0; j < kReacherLinks; ++j) {
    heading += joint_angles[j];
    tip.x += kLinkLength * std::cos(heading);
    tip.y += kLinkLength * std::sin(heading);
  }
  return tip;
}

HardParams hard_env_params(EnvKind kind) {
  if (kind == EnvKind::Pusher) return {kind, {0.05}};
  const auto box = RandomizationSpace::for_env(kind, RangeMode::Calibrated);
  std::vector<double> physical(8);
  for (int j = 0; j < 4; ++j) {
    physical[j] = 0.6 * box.lower()[j];
    physical[4 + j] = box.upper()[4 + j];
  }
  return {kind, std::move(physical)};
}

EnvInstance::EnvInstance(EnvKind kind, std::vector<double> physical,
                         int max_steps)
    : kind_(kind),
      physical_(std::move(physical)),
      state_(state_dim(kind), 0.0),
      max_steps_(max_steps) {
  if (physical_.size() != n_rand(kind))
    throw ConfigError(std::string(to_string(kind)) + " expects " +
                      std::to_string(n_rand(kind)) + " params, got " +
                      std::to_string(physical_.size()));
  if (max_steps_ < 1) throw ConfigError("max_steps must be positive");
  reset(canonical_goal(kind));
}

const std::vector<double>& EnvInstance::reset(Point2 goal) {
  if (!in_reachable_region(kind_, goal))
    throw ArgumentError("goal (" + std::to_string(goal.x) + ", " +
                        std::to_string(goal.y) + ") outside the " +
                        std::string(to_string(kind_)) + " reachable region");
  goal_ = goal;
  step_count_ = 0;
  done_ = false;
  std::fill(state_.begin(), state_.end(), 0.0);
  if (kind_ == EnvKind::Reacher) {
    sync_reacher_tip();
  } else {
    state_[kAgent] = kPusherAgentStart.x;
    state_[kAgent + 1] = kPusherAgentStart.y;
    state_[kPuck] = kPusherPuckStart.x;
    state_[kPuck + 1] = kPusherPuckStart.y;
  }
  state_[kGoal] = goal.x;
  state_[kGoal + 1] = goal.y;
  return state_;
}

void EnvInstance::restore(std::span<const double> state, int step_count) {
  if (state.size() != state_.size())
    throw ArgumentError("restore: state length " +
                        std::to_string(state.size()) + ", expected " +
                        std::to_string(state_.size()));
  if (step_count < 0 || step_count > max_steps_)
    throw ArgumentError("restore: step count out of range");
  std::copy(state.begin(), state.end(), state_.begin());
  goal_ = {state_[kGoal], state_[kGoal + 1]};
  if (kind_ == EnvKind::Reacher) sync_reacher_tip();
  step_count_ = step_count;
  done_ = step_count_ == max_steps_ || at_goal();
}

StepResult EnvInstance::step(std::span<const double> action) {
  if (done_) throw UsageError("step called on a finished episode");
  if (action.size() != action_dim())
    throw ArgumentError("action length " + std::to_string(action.size()) +
                        ", expected " + std::to_string(action_dim()));
  double clipped[4];
  for (std::size_t i = 0; i < action.size(); ++i)
    clipped[i] = std::isfinite(action[i]) ? std::clamp(action[i], -1.0, 1.0)
                                          : 0.0;
  const std::span<const double> a(clipped, action.size());
  if (kind_ == EnvKind::Reacher)
    step_reacher(a);
  else
    step_pusher(a);
  ++step_count_;

  StepResult result;
  const double dist = distance_to_goal();
  result.reward = -dist;
  result.success = at_goal();
  result.done = result.success || step_count_ == max_steps_;
  done_ = result.done;
  result.next_state = state_;
  return result;
}

void EnvInstance::step_reacher(std::span<const double> a) {
  for (int j = 0; j < kReacherLinks; ++j) {
    const double gain = physical_[j];
    const double damping = physical_[kReacherLinks + j];
    state_[j] = state_[j] + gain * a[j] - damping * state_[j];
  }
  sync_reacher_tip();
}

void EnvInstance::step_pusher(std::span<const double> a) {
  double* agent = &state_[kAgent];
  double* puck = &state_[kPuck];
  double* vel = &state_[kPuckVel];
  const double friction = physical_[0];

  for (int k = 0; k < 2; ++k)
    agent[k] = std::clamp(agent[k] + kPusherAgentSpeed * a[k], 0.0, 1.0);

  // The agent can only push: contact raises the puck's speed along the
  // contact normal to the agent's, never lowers it.
  const double dx = puck[0] - agent[0];
  const double dy = puck[1] - agent[1];
  const double gap = std::hypot(dx, dy);
  if (gap > 0.0 && gap < kPusherContactRadius) {
    const double nx = dx / gap;
    const double ny = dy / gap;
    const double push = kPusherAgentSpeed * (a[0] * nx + a[1] * ny);
    const double current = vel[0] * nx + vel[1] * ny;
    if (push > current) {
      vel[0] += (push - current) * nx;
      vel[1] += (push - current) * ny;
    }
  }

  for (int k = 0; k < 2; ++k) {
    puck[k] += vel[k];
    if (puck[k] < 0.0 || puck[k] > 1.0) {
      puck[k] = std::clamp(puck[k], 0.0, 1.0);
      vel[k] = 0.0;
    }
    vel[k] *= 1.0 - friction;
  }
}

void EnvInstance::sync_reacher_tip() {
  const Point2 tip = reacher_tip(std::span<const double>(state_).first(4));
  state_[kTip] = tip.x;
  state_[kTip + 1] = tip.y;
}

Point2 EnvInstance::achieved_point() const {
  if (kind_ == EnvKind::Reacher) return {state_[kTip], state_[kTip + 1]};
  return {state_[kPuck], state_[kPuck + 1]};
}

double EnvInstance::distance_to_goal() const {
  return distance(achieved_point(), goal_);
}

bool EnvInstance::at_goal() const {
  if (distance_to_goal() >= kGoalThreshold) return false;
  return kind_ == EnvKind::Reacher ||
         std::hypot(state_[kPuckVel], state_[kPuckVel + 1]) < kPuckRestSpeed;
}

EnvInstance make_env(const RandomizationSpace& space, const EnvParams& params,
                     EnvKind kind, int max_steps) {
  if (space.n_dims() != n_rand(kind))
    throw ConfigError("space has " + std::to_string(space.n_dims()) +
                      " dims but " + std::string(to_string(kind)) +
                      " needs " + std::to_string(n_rand(kind)));
  return EnvInstance{kind, space.denormalize(params), max_steps};
}

EnvInstance make_env(const HardParams& hard, int max_steps) {
  return EnvInstance{hard.kind, hard.physical, max_steps};
}

bool in_reachable_region(EnvKind kind, Point2 goal) {
  if (!std::isfinite(goal.x) || !std::isfinite(goal.y)) return false;
  if (kind == EnvKind::Reacher)
    return std::hypot(goal.x, goal.y) <= kReacherReach + 1e-12;
  return goal.x >= 0.0 && goal.x <= 1.0 && goal.y >= 0.0 && goal.y <= 1.0;
}

Point2 sample_goal(EnvKind kind, Rng& rng) {
  if (kind == EnvKind::Pusher)
    return {0.5 + 0.4 * uniform01(rng), 0.3 + 0.4 * uniform01(rng)};
  // Area-uniform on the half annulus.
  constexpr double r_lo = 0.1, r_hi = 0.35;
  const double u = uniform01(rng);
  const double r = std::sqrt(r_lo * r_lo + u * (r_hi * r_hi - r_lo * r_lo));
  const double angle = (uniform01(rng) - 0.5) * std::numbers::pi;
  return {r * std::cos(angle), r * std::sin(angle)};
}

Point2 canonical_goal(EnvKind kind) {
  return kind == EnvKind::Pusher ? Point2{0.7, 0.5} : Point2{0.25, 0.15};
}

}  // namespace ssadr::envs
