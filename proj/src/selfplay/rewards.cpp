#include "ssadr/selfplay/rewards.hpp"

#include <algorithm>

namespace ssadr::selfplay {

double alice_reward(int t_a, int t_b, double upsilon) {
  return upsilon * std::max(0, t_b - t_a);
}

double bob_selfplay_reward(int t_b, double upsilon) { return -upsilon * t_b; }

}  // namespace ssadr::selfplay
