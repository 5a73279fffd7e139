#pragma once

namespace ssadr::selfplay {

// Alice is paid for tasks that take Bob longer than they took her.
// upsilon * max(0, t_b - t_a).
double alice_reward(int t_a, int t_b, double upsilon);

// Bob is charged for time. -upsilon * t_b.
double bob_selfplay_reward(int t_b, double upsilon);

}  // namespace ssadr::selfplay
