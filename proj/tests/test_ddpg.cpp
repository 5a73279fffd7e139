#include <cmath>
#include <vector>

#include "doctest.h"
#include "ssadr/ddpg/agent.hpp"
#include "ssadr/ddpg/replay_buffer.hpp"
#include "ssadr/errors.hpp"
#include "support/gradcheck.hpp"

using namespace ssadr;
using namespace ssadr::ddpg;
using ssadr::testing::random_vector;

namespace {

constexpr std::size_t kState = 3;
constexpr std::size_t kAction = 2;

DdpgConfig small_config() {
  DdpgConfig c;
  c.actor_hidden = {6, 5};
  c.critic_hidden = {7, 4};
  return c;
}

Transition make_transition(Rng& rng, double reward, double done) {
  Transition t;
  t.state = random_vector(kState, rng);
  t.action = random_vector(kAction, rng);
  t.next_state = random_vector(kState, rng);
  t.reward = reward;
  t.done = done;
  t.goal = {uniform01(rng), uniform01(rng)};
  return t;
}

// Every parameter zero except the output bias: a constant function.
void make_constant(approx::Approximator& f, double value) {
  auto p = f.parameters();
  std::fill(p.begin(), p.end(), 0.0);
  p[p.size() - 1] = value;
}

double l2_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

Transition tagged(int i) {
  Transition t;
  t.state = {static_cast<double>(i)};
  t.action = {0.0};
  t.next_state = {0.0};
  return t;
}

}  // namespace

TEST_CASE("replay buffer keeps the newest capacity transitions in order") {
  constexpr std::size_t capacity = 7;
  for (std::size_t k : {0u, 1u, 3u, 7u, 20u}) {
    ReplayBuffer buf(capacity);
    for (std::size_t i = 1; i <= capacity + k; ++i) {
      buf.push(tagged(static_cast<int>(i)));
      CHECK(buf.size() <= capacity);
    }
    REQUIRE(buf.size() == capacity);
    for (std::size_t i = 0; i < capacity; ++i)
      CHECK(buf.at(i).state[0] == static_cast<double>(k + 1 + i));
  }
}

TEST_CASE("replay buffer bounds and errors") {
  CHECK_THROWS_AS(ReplayBuffer(0), ConfigError);
  ReplayBuffer buf(4);
  Rng rng(1);
  CHECK(buf.empty());
  CHECK_THROWS_AS(buf.sample_indices(3, rng), UsageError);
  buf.push(tagged(1));
  buf.push(tagged(2));
  CHECK_THROWS_AS(buf.at(2), ArgumentError);
  for (auto i : buf.sample_indices(200, rng)) CHECK(i < 2);
  buf.clear();
  CHECK(buf.empty());
  CHECK(buf.capacity() == 4);
}

TEST_CASE("act is deterministic, clipped, and noise-free at zero sigma") {
  Rng init(2);
  DdpgConfig cfg = small_config();
  DdpgAgent agent(kState, kAction, cfg, init);
  Rng rng(3);
  const auto s = random_vector(kState, rng);
  const envs::Point2 g{0.3, -0.2};
  CHECK(agent.act(s, g, false, rng) == agent.act(s, g, false, rng));

  cfg.exploration_sigma = 0.0;
  Rng init2(2);
  DdpgAgent quiet(kState, kAction, cfg, init2);
  CHECK(quiet.act(s, g, true, rng) == quiet.act(s, g, false, rng));

  cfg.exploration_sigma = 5.0;
  Rng init3(2);
  DdpgAgent loud(kState, kAction, cfg, init3);
  for (int i = 0; i < 200; ++i)
    for (double v : loud.act(random_vector(kState, rng, -10, 10), g, true, rng)) {
      CHECK(v >= -1.0);
      CHECK(v <= 1.0);
    }
}

TEST_CASE("invalid agent configuration") {
  Rng rng(4);
  DdpgConfig cfg = small_config();
  cfg.tau = 0.0;
  CHECK_THROWS_AS(DdpgAgent(kState, kAction, cfg, rng), ConfigError);
  cfg.tau = 1.5;
  CHECK_THROWS_AS(DdpgAgent(kState, kAction, cfg, rng), ConfigError);
  cfg.tau = 0.5;
  cfg.gamma = -0.1;
  CHECK_THROWS_AS(DdpgAgent(kState, kAction, cfg, rng), ConfigError);
}

TEST_CASE("targets start equal in shape and value to online nets") {
  Rng rng(5);
  DdpgAgent agent(kState, kAction, small_config(), rng);
  CHECK(agent.target_actor() == agent.actor());
  CHECK(agent.target_critic() == agent.critic());
  CHECK(agent.config().gamma == 0.99);
}

TEST_CASE("copy_weights returns a detached copy") {
  Rng rng(6);
  DdpgAgent agent(kState, kAction, small_config(), rng);
  const auto copy = agent.copy_weights();
  CHECK(copy.size() == agent.actor().parameter_count());
  const auto copy2 = copy;
  agent.actor().parameters()[0] += 1.0;
  CHECK(copy[0] != agent.actor().parameters()[0]);
  CHECK(copy2 == copy);
}

TEST_CASE("update is skipped while the buffer is short") {
  Rng rng(7);
  DdpgAgent agent(kState, kAction, small_config(), rng);
  ReplayBuffer buf(100);
  for (int i = 0; i < 9; ++i) buf.push(make_transition(rng, 0.0, 0.0));
  const auto before = agent.copy_weights();
  CHECK_FALSE(agent.update(buf, 10, rng).has_value());
  CHECK(agent.copy_weights() == before);
}

TEST_CASE("Bellman target on a three-transition fixture") {
  Rng rng(8);
  DdpgConfig cfg = small_config();
  cfg.gamma = 0.9;
  DdpgAgent agent(kState, kAction, cfg, rng);
  const double q_target = 2.5;
  const double q_online = -0.75;
  make_constant(agent.target_critic(), q_target);
  make_constant(agent.critic(), q_online);

  ReplayBuffer buf(3);
  const double rewards[3] = {1.0, -0.5, 0.25};
  const double dones[3] = {0.0, 1.0, 0.0};
  for (int i = 0; i < 3; ++i) buf.push(make_transition(rng, rewards[i], dones[i]));

  // Replay the sampler to know which rows the update sees.
  Rng sample_rng(99);
  Rng replay = sample_rng;
  const auto idx = buf.sample_indices(3, replay);

  // y = r + gamma (1 - done) Q'(s', pi'(s')) with Q' constant.
  double expected = 0.0;
  for (auto i : idx) {
    const double y = rewards[i] + cfg.gamma * (1.0 - dones[i]) * q_target;
    expected += (q_online - y) * (q_online - y) / 3.0;
  }
  // By hand: y = 3.25, -0.5, 2.5.
  CHECK(rewards[0] + 0.9 * q_target == doctest::Approx(3.25));
  CHECK(rewards[2] + 0.9 * q_target == doctest::Approx(2.5));

  const auto stats = agent.update(buf, 3, sample_rng);
  REQUIRE(stats.has_value());
  CHECK(stats->critic_loss == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("Bellman target with general target networks") {
  Rng rng(9);
  DdpgConfig cfg = small_config();
  DdpgAgent agent(kState, kAction, cfg, rng);
  // Make the targets differ from the online nets.
  for (double& p : agent.target_critic().parameters()) p *= 1.3;
  for (double& p : agent.target_actor().parameters()) p *= 0.7;
  ReplayBuffer buf(3);
  for (int i = 0; i < 3; ++i) buf.push(make_transition(rng, 0.1 * i, i == 1 ? 1.0 : 0.0));

  Rng sample_rng(5);
  Rng replay = sample_rng;
  const auto idx = buf.sample_indices(3, replay);
  double expected = 0.0;
  for (auto i : idx) {
    const Transition& t = buf.at(i);
    std::vector<double> next_in = policy_input(t.next_state, t.goal);
    const auto a_next = agent.target_actor().forward(next_in);
    next_in.insert(next_in.end(), a_next.begin(), a_next.end());
    const double q_next = agent.target_critic().forward(next_in)[0];
    const double y = t.reward + cfg.gamma * (1.0 - t.done) * q_next;
    const double q = agent.q_value(t.state, t.goal, t.action);
    expected += (q - y) * (q - y) / 3.0;
  }
  const auto stats = agent.update(buf, 3, sample_rng);
  REQUIRE(stats.has_value());
  CHECK(stats->critic_loss == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("soft update converges geometrically with frozen online nets") {
  Rng rng(10);
  DdpgConfig cfg = small_config();
  cfg.tau = 0.05;
  DdpgAgent agent(kState, kAction, cfg, rng);
  for (double& p : agent.target_actor().parameters()) p += 1.0;
  for (double& p : agent.target_critic().parameters()) p -= 0.5;
  const double d0a = l2_distance(agent.target_actor().parameters(), agent.actor().parameters());
  const double d0c = l2_distance(agent.target_critic().parameters(), agent.critic().parameters());
  double prev_a = d0a;
  for (int n = 1; n <= 100; ++n) {
    agent.soft_update_targets();
    const double da =
        l2_distance(agent.target_actor().parameters(), agent.actor().parameters());
    const double dc =
        l2_distance(agent.target_critic().parameters(), agent.critic().parameters());
    CHECK(da <= prev_a);
    prev_a = da;
    const double rate = std::pow(1.0 - cfg.tau, n);
    CHECK(da == doctest::Approx(d0a * rate).epsilon(1e-6));
    CHECK(dc == doctest::Approx(d0c * rate).epsilon(1e-6));
  }
}

TEST_CASE("tau of one copies the online nets into the targets") {
  Rng rng(11);
  DdpgConfig cfg = small_config();
  cfg.tau = 1.0;
  DdpgAgent agent(kState, kAction, cfg, rng);
  ReplayBuffer buf(10);
  for (int i = 0; i < 10; ++i) buf.push(make_transition(rng, 1.0, 0.0));
  REQUIRE(agent.update(buf, 5, rng).has_value());
  CHECK(agent.target_actor() == agent.actor());
  CHECK(agent.target_critic() == agent.critic());
}

TEST_CASE("terminal zero-reward transitions drive the critic to zero") {
  Rng rng(12);
  DdpgAgent agent(kState, kAction, small_config(), rng);
  ReplayBuffer buf(10);
  const Transition t = make_transition(rng, 0.0, 1.0);
  for (int i = 0; i < 10; ++i) buf.push(t);
  const double q0 = std::abs(agent.q_value(t.state, t.goal, t.action));
  for (int i = 0; i < 500; ++i) REQUIRE(agent.update(buf, 10, rng).has_value());
  const double q1 = std::abs(agent.q_value(t.state, t.goal, t.action));
  CHECK(q1 < 1e-2);
  CHECK(q1 < q0);
}

TEST_CASE("critic loss decreases on a frozen single-transition buffer") {
  Rng rng(13);
  DdpgAgent agent(kState, kAction, small_config(), rng);
  ReplayBuffer buf(1);
  buf.push(make_transition(rng, -0.8, 1.0));
  double first = 0.0, last = 0.0;
  for (int i = 0; i < 200; ++i) {
    const auto stats = agent.update(buf, 1, rng);
    REQUIRE(stats.has_value());
    CHECK(std::isfinite(stats->critic_loss));
    if (i == 0) first = stats->critic_loss;
    last = stats->critic_loss;
  }
  CHECK(last < first);
  CHECK(last < 0.1 * first);
}

TEST_CASE("updates keep every parameter finite") {
  Rng rng(14);
  DdpgAgent agent(kState, kAction, small_config(), rng);
  ReplayBuffer buf(500);
  for (int i = 0; i < 500; ++i) buf.push(make_transition(rng, -uniform01(rng), i % 7 == 0));
  for (int i = 0; i < 300; ++i) REQUIRE(agent.update(buf, 32, rng).has_value());
  for (const auto* f : {&agent.actor(), &agent.critic(), &agent.target_actor(),
                        &agent.target_critic()})
    for (double p : f->parameters()) CHECK(std::isfinite(p));
}

TEST_CASE("a non-finite reward is reported as a numeric error") {
  Rng rng(15);
  DdpgAgent agent(kState, kAction, small_config(), rng);
  ReplayBuffer buf(4);
  for (int i = 0; i < 4; ++i) buf.push(make_transition(rng, std::nan(""), 0.0));
  CHECK_THROWS_AS(agent.update(buf, 4, rng), NumericError);
}
