#include "ssadr/envs/scripted.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace ssadr::envs {

namespace {

constexpr double kPushLead = 10.0;

// Damped least squares on the 2x4 tip Jacobian, warm-started from `theta`.
std::array<double, 4> solve_ik(std::array<double, 4> theta, Point2 target) {
  constexpr double lambda2 = 1e-4;
  for (int iter = 0; iter < 100; ++iter) {
    const Point2 tip = reacher_tip(theta);
    const double ex = target.x - tip.x;
    const double ey = target.y - tip.y;
    if (std::hypot(ex, ey) < 1e-6) break;
    // Column j: derivative of the tip w.r.t. theta_j.
    std::array<double, 4> jx{}, jy{};
    double heading = 0.0;
    std::array<double, 4> hx{}, hy{};
    for (int j = 0; j < 4; ++j) {
      heading += theta[j];
      hx[j] = kLinkLength * std::cos(heading);
      hy[j] = kLinkLength * std::sin(heading);
    }
    for (int j = 0; j < 4; ++j) {
      for (int k = j; k < 4; ++k) {
        jx[j] -= hy[k];
        jy[j] += hx[k];
      }
    }
    // dtheta = J^T (J J^T + lambda^2 I)^{-1} e
    double a = lambda2, b = 0.0, d = lambda2;
    for (int j = 0; j < 4; ++j) {
      a += jx[j] * jx[j];
      b += jx[j] * jy[j];
      d += jy[j] * jy[j];
    }
    const double det = a * d - b * b;
    const double wx = (d * ex - b * ey) / det;
    const double wy = (a * ey - b * ex) / det;
    for (int j = 0; j < 4; ++j) theta[j] += jx[j] * wx + jy[j] * wy;
  }
  return theta;
}

double ik_residual(const std::array<double, 4>& theta, Point2 target) {
  const Point2 tip = reacher_tip(theta);
  return std::hypot(target.x - tip.x, target.y - tip.y);
}

// Solved from fixed seeds so the joint target depends only on the goal.
std::array<double, 4> goal_joint_target(Point2 target) {
  const double heading = std::atan2(target.y, target.x);
  std::array<double, 4> best{};
  double best_res = std::numeric_limits<double>::infinity();
  double best_norm = std::numeric_limits<double>::infinity();
  for (double bend : {0.4, -0.4, 0.8, -0.8, 1.2, -1.2}) {
    const std::array<double, 4> seed{heading - 1.5 * bend, bend, bend, bend};
    const auto cand = solve_ik(seed, target);
    const double res = ik_residual(cand, target);
    double norm = 0.0;
    for (double v : cand) norm += v * v;
    const bool converged = res < 1e-4;
    const bool best_converged = best_res < 1e-4;
    if ((converged && (!best_converged || norm < best_norm)) ||
        (!converged && !best_converged && res < best_res)) {
      best = cand;
      best_res = res;
      best_norm = norm;
    }
  }
  return best;
}

std::vector<double> reacher_action(const EnvInstance& env) {
  const auto& s = env.state();
  const auto& p = env.physical_params();
  std::array<double, 4> theta{s[0], s[1], s[2], s[3]};
  const auto target = goal_joint_target(env.goal());
  std::vector<double> action(4);
  for (int j = 0; j < 4; ++j) {
    const double gain = p[j];
    const double damping = p[4 + j];
    const double needed = target[j] - theta[j] * (1.0 - damping);
    action[j] = std::clamp(needed / gain, -1.0, 1.0);
  }
  return action;
}

std::vector<double> pusher_action(const EnvInstance& env) {
  const auto& s = env.state();
  const Point2 agent{s[0], s[1]};
  const Point2 puck{s[2], s[3]};
  const Point2 goal = env.goal();
  const double dist = distance(puck, goal);
  if (dist < 1e-12) return {0.0, 0.0};

  const double ux = (goal.x - puck.x) / dist;
  const double uy = (goal.y - puck.y) / dist;
  const double px = -uy, py = ux;
  const double rx = agent.x - puck.x, ry = agent.y - puck.y;
  const double along = rx * ux + ry * uy;
  const double lateral = rx * px + ry * py;

  if (along < -0.05 && std::abs(lateral) < 0.01) {
    const double speed = std::min(1.0, dist / (kPushLead * kPusherAgentSpeed));
    const double correct = std::clamp(-lateral / kPusherAgentSpeed, -1.0, 1.0);
    return {ux * speed + px * correct, uy * speed + py * correct};
  }
  Point2 waypoint;
  if (along < -0.05) {
    waypoint = {puck.x - 0.07 * ux, puck.y - 0.07 * uy};
  } else {
    // Circle around the puck to get behind it.
    const double side = lateral >= 0.0 ? 0.12 : -0.12;
    waypoint = {puck.x + side * px - 0.03 * ux, puck.y + side * py - 0.03 * uy};
  }
  double ax = (waypoint.x - agent.x) / kPusherAgentSpeed;
  double ay = (waypoint.y - agent.y) / kPusherAgentSpeed;
  const double norm = std::hypot(ax, ay);
  if (norm > 1.0) {
    ax /= norm;
    ay /= norm;
  }
  return {ax, ay};
}

}  // namespace

std::vector<double> scripted_action(const EnvInstance& env) {
  return env.kind() == EnvKind::Reacher ? reacher_action(env)
                                        : pusher_action(env);
}

}  // namespace ssadr::envs
