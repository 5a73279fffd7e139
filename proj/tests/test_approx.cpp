#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "ssadr/adr/discriminator.hpp"
#include "ssadr/approx/adam.hpp"
#include "ssadr/approx/approximator.hpp"
#include "ssadr/approx/kernels.hpp"
#include "ssadr/ddpg/agent.hpp"
#include "ssadr/envs/env.hpp"
#include "ssadr/errors.hpp"
#include "ssadr/selfplay/stopping_policy.hpp"
#include "support/gradcheck.hpp"
#include "support/netcheck.hpp"

using namespace ssadr;
using namespace ssadr::approx;
using ssadr::testing::check_gradient;
using ssadr::testing::kFdRelTol;
using ssadr::testing::random_vector;
using ssadr::testing::fd_batch;
using ssadr::testing::fd_single;


TEST_CASE("parameter count is the sum over layers") {
  Rng rng(1);
  const std::vector<std::size_t> sizes{3, 7, 5, 2};
  Approximator f(sizes, Activation::Tanh, rng);
  CHECK(f.parameter_count() == (3 + 1) * 7 + (7 + 1) * 5 + (5 + 1) * 2);
  CHECK(Approximator::parameter_count(sizes) == f.parameter_count());
}

TEST_CASE("initial weights lie within 1/sqrt(fan_in)") {
  Rng rng(2);
  Approximator f({16, 9, 4}, Activation::Identity, rng);
  const auto p = f.parameters();
  for (std::size_t i = 0; i < (16 + 1) * 9; ++i) CHECK(std::abs(p[i]) <= 1.0 / 4.0);
  for (std::size_t i = (16 + 1) * 9; i < p.size(); ++i) CHECK(std::abs(p[i]) <= 1.0 / 3.0);
}

TEST_CASE("invalid construction and dimension mismatches") {
  Rng rng(3);
  CHECK_THROWS_AS(Approximator({4}, Activation::Identity, rng), ConfigError);
  CHECK_THROWS_AS(Approximator({4, 0, 1}, Activation::Identity, rng), ConfigError);
  CHECK_THROWS_AS(Approximator({2, 2}, Activation::Identity, std::vector<double>(5)),
                  ConfigError);
  CHECK_THROWS_AS(parse_activation("softmax"), ConfigError);
  Approximator f({3, 4, 2}, Activation::Identity, rng);
  CHECK_THROWS_AS(f.forward(std::vector<double>(2)), ArgumentError);
  CHECK_THROWS_AS(f.gradient(std::vector<double>(3), std::vector<double>(3)),
                  ArgumentError);
  CHECK_THROWS_AS(f.set_parameters(std::vector<double>(3)), ArgumentError);
}

TEST_CASE("activation names round trip") {
  for (auto a : {Activation::Identity, Activation::Tanh, Activation::Sigmoid})
    CHECK(parse_activation(to_string(a)) == a);
}

TEST_CASE("forward fixtures") {
  SUBCASE("zero parameters give zero pre-activation") {
    Approximator f({3, 5, 5, 2}, Activation::Tanh,
                   std::vector<double>(Approximator::parameter_count(
                                           std::vector<std::size_t>{3, 5, 5, 2}),
                                       0.0));
    const auto y = f.forward_preactivation(std::vector<double>{1.0, -2.0, 0.5});
    for (double v : y) CHECK(v == 0.0);
  }
  SUBCASE("identity layer") {
    Approximator f({2, 2}, Activation::Identity, std::vector<double>{1, 0, 0, 1, 0, 0});
    const auto y = f.forward(std::vector<double>{3.0, -1.0});
    CHECK(y[0] == 3.0);
    CHECK(y[1] == -1.0);
  }
  SUBCASE("deterministic and bounded heads") {
    Rng rng(4);
    for (auto head : {Activation::Tanh, Activation::Sigmoid}) {
      Approximator f({4, 8, 8, 3}, head, rng);
      for (int i = 0; i < 50; ++i) {
        auto x = random_vector(4, rng, -50.0, 50.0);
        const auto a = f.forward(x);
        CHECK(a == f.forward(x));
        for (double v : a) {
          if (head == Activation::Tanh) {
            CHECK(v >= -1.0);
            CHECK(v <= 1.0);
          } else {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
          }
        }
      }
    }
  }
}

TEST_CASE("single linear layer gradient is the outer product") {
  Rng rng(5);
  Approximator f({3, 2}, Activation::Identity, rng);
  const std::vector<double> x{0.5, -1.0, 2.0};
  const std::vector<double> u{1.5, -0.25};
  const auto g = f.gradient(x, u);
  REQUIRE(g.size() == 8);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 2; ++j) CHECK(g[i * 2 + j] == doctest::Approx(x[i] * u[j]));
  CHECK(g[6] == doctest::Approx(u[0]));
  CHECK(g[7] == doctest::Approx(u[1]));
  const auto z = f.gradient(x, std::vector<double>{0.0, 0.0});
  for (double v : z) CHECK(v == 0.0);
}

TEST_CASE("finite differences agree on generic nets") {
  Rng rng(6);
  for (auto head : {Activation::Identity, Activation::Tanh, Activation::Sigmoid}) {
    CAPTURE(to_string(head));
    Approximator f({6, 12, 10, 3}, head, rng);
    CHECK(fd_single(f, rng) <= kFdRelTol);
    if (head != Activation::Identity) CHECK(fd_single(f, rng, Upstream::PreActivation) <= kFdRelTol);
    const auto [ep, ei] = fd_batch(f, rng);
    CHECK(ep <= kFdRelTol);
    CHECK(ei <= kFdRelTol);
  }
}

TEST_CASE("finite differences agree on every network the learners build") {
  Rng rng(7);
  for (auto kind : {envs::EnvKind::Reacher, envs::EnvKind::Pusher}) {
    CAPTURE(envs::to_string(kind));
    const std::size_t sd = envs::EnvInstance::state_dim(kind);
    const std::size_t ad = envs::EnvInstance::action_dim(kind);
    ddpg::DdpgAgent agent(sd, ad, ddpg::DdpgConfig{}, rng);
    selfplay::StoppingPolicy stop(sd, selfplay::StoppingPolicyConfig{}, rng);
    adr::Discriminator disc(adr::feature_length(sd, ad), adr::DiscriminatorConfig{}, rng);
    for (const Approximator* f :
         {&agent.actor(), &agent.critic(), &stop.net(), &disc.net()}) {
      CHECK(fd_single(*f, rng) <= kFdRelTol);
      const auto [ep, ei] = fd_batch(*f, rng);
      CHECK(ep <= kFdRelTol);
      CHECK(ei <= kFdRelTol);
    }
  }
}

TEST_CASE("serial and parallel kernels are bit-identical") {
  Rng rng(8);
  const kernels::DenseShape shape{37, 23, 19};
  const auto in = random_vector(shape.batch * shape.fan_in, rng);
  const auto w = random_vector(shape.fan_in * shape.fan_out, rng);
  const auto b = random_vector(shape.fan_out, rng);
  const auto delta = random_vector(shape.batch * shape.fan_out, rng);

  std::vector<double> out_s(shape.batch * shape.fan_out), out_p(out_s.size());
  kernels::serial::dense_forward(in, w, b, out_s, shape);
  kernels::parallel::dense_forward(in, w, b, out_p, shape);
  CHECK(out_s == out_p);

  std::vector<double> gw_s(w.size(), 0.5), gw_p(w.size(), 0.5);
  std::vector<double> gb_s(b.size(), -0.5), gb_p(b.size(), -0.5);
  kernels::serial::dense_backward_params(in, delta, gw_s, gb_s, shape);
  kernels::parallel::dense_backward_params(in, delta, gw_p, gb_p, shape);
  CHECK(gw_s == gw_p);
  CHECK(gb_s == gb_p);

  std::vector<double> gi_s(in.size()), gi_p(in.size());
  kernels::serial::dense_backward_input(w, delta, gi_s, shape);
  kernels::parallel::dense_backward_input(w, delta, gi_p, shape);
  CHECK(gi_s == gi_p);
}

TEST_CASE("approximator output does not depend on the backend") {
  Rng rng(9);
  Approximator f({8, 64, 64, 2}, Activation::Tanh, rng);
  Matrix x(100, 8);
  x.data = random_vector(x.data.size(), rng);
  Matrix u(100, 2);
  u.data = random_vector(u.data.size(), rng);
  const auto saved = kernels::backend();

  auto run = [&](kernels::Backend be) {
    kernels::set_backend(be);
    Approximator::Tape tape;
    auto y = f.forward_batch(x, &tape);
    std::vector<double> g(f.parameter_count(), 0.0);
    Matrix gin;
    f.backward(tape, u, g, &gin);
    return std::make_tuple(y.data, g, gin.data);
  };
  const auto serial = run(kernels::Backend::Serial);
  const auto parallel = run(kernels::Backend::Parallel);
  kernels::set_backend(saved);
  CHECK(std::get<0>(serial) == std::get<0>(parallel));
  CHECK(std::get<1>(serial) == std::get<1>(parallel));
  CHECK(std::get<2>(serial) == std::get<2>(parallel));
}

TEST_CASE("first adam step has the closed form") {
  AdamConfig cfg;
  cfg.learning_rate = 0.01;
  Adam opt(3, cfg);
  std::vector<double> p{1.0, -2.0, 0.5};
  const std::vector<double> g{0.3, -4.0, 1e-3};
  const auto before = p;
  opt.step(p, g);
  for (int i = 0; i < 3; ++i) {
    const double expected = -cfg.learning_rate * g[i] / (std::abs(g[i]) + cfg.epsilon);
    CHECK(p[i] - before[i] == doctest::Approx(expected).epsilon(1e-9));
  }
  CHECK(opt.steps() == 1);
}

TEST_CASE("adam with a constant gradient moves at the learning rate") {
  AdamConfig cfg;
  cfg.learning_rate = 1e-3;
  Adam opt(2, cfg);
  std::vector<double> p{0.0, 0.0};
  const std::vector<double> g{2.0, -0.1};
  for (int i = 0; i < 2000; ++i) opt.step(p, g);
  std::vector<double> prev = p;
  opt.step(p, g);
  CHECK(p[0] - prev[0] == doctest::Approx(-cfg.learning_rate).epsilon(1e-6));
  CHECK(p[1] - prev[1] == doctest::Approx(cfg.learning_rate).epsilon(1e-6));
}

TEST_CASE("adam with zero gradient leaves parameters and decays moments") {
  Adam opt(2);
  std::vector<double> p{1.0, 2.0};
  opt.step(p, std::vector<double>{1.0, -1.0});
  const auto after_first = p;
  const auto m = opt.first_moment();
  const auto v = opt.second_moment();
  opt.step(p, std::vector<double>{0.0, 0.0});
  for (int i = 0; i < 2; ++i) {
    CHECK(std::abs(opt.first_moment()[i]) < std::abs(m[i]));
    CHECK(opt.second_moment()[i] < v[i]);
  }
  // A zero gradient still moves the parameters through the decaying moment;
  // only from fresh moments is the step exactly zero.
  Adam fresh(2);
  std::vector<double> q{1.0, 2.0};
  fresh.step(q, std::vector<double>{0.0, 0.0});
  CHECK(q == std::vector<double>{1.0, 2.0});
  CHECK(after_first != p);
  CHECK(fresh.steps() == 1);
}

TEST_CASE("adam is deterministic and rejects bad gradients") {
  Adam a(3), b(3);
  std::vector<double> pa{0.1, 0.2, 0.3}, pb = pa;
  Rng rng(10);
  for (int i = 0; i < 20; ++i) {
    const auto g = random_vector(3, rng);
    a.step(pa, g);
    b.step(pb, g);
  }
  CHECK(pa == pb);

  const auto snapshot = pa;
  const auto m = a.first_moment();
  const std::size_t steps = a.steps();
  CHECK_THROWS_AS(a.step(pa, std::vector<double>{0.0, std::nan(""), 0.0}), NumericError);
  CHECK_THROWS_AS(
      a.step(pa, std::vector<double>{std::numeric_limits<double>::infinity(), 0, 0}),
      NumericError);
  CHECK(pa == snapshot);
  CHECK(a.first_moment() == m);
  CHECK(a.steps() == steps);
  CHECK_THROWS_AS(a.step(pa, std::vector<double>{1.0}), ArgumentError);
}

TEST_CASE("save and load round trip bit-exactly") {
  Rng rng(11);
  for (auto head : {Activation::Identity, Activation::Tanh, Activation::Sigmoid}) {
    Approximator f({5, 7, 3, 2}, head, rng);
    f.parameters()[0] = 1.0 / 3.0;
    f.parameters()[1] = -std::numeric_limits<double>::denorm_min();
    std::stringstream ss;
    save(ss, f);
    const Approximator g = load(ss);
    CHECK(g == f);
  }
}

TEST_CASE("load rejects malformed blobs") {
  Rng rng(12);
  Approximator f({2, 3, 1}, Activation::Sigmoid, rng);
  std::stringstream ss;
  save(ss, f);
  const std::string good = ss.str();

  auto reject = [](const std::string& text) {
    std::istringstream in(text);
    CHECK_THROWS_AS(load(in), ConfigError);
  };
  reject("");
  reject("ssadr-approximator 2\n" + good.substr(good.find('\n') + 1));
  reject(good.substr(0, good.size() / 2));
  std::string bad_head = good;
  bad_head.replace(bad_head.find("sigmoid"), 7, "softmax");
  reject(bad_head);
  std::string no_end = good.substr(0, good.rfind("end"));
  reject(no_end);
}
