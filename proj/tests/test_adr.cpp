#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "ssadr/adr/discriminator.hpp"
#include "ssadr/adr/svpg.hpp"
#include "ssadr/errors.hpp"
#include "support/gradcheck.hpp"
#include "support/svpg_oracle.hpp"

using namespace ssadr;
using namespace ssadr::adr;
using ssadr::testing::check_gradient;
using ssadr::testing::kFdRelTol;
using ssadr::testing::random_vector;
using ssadr::testing::median_oracle;
using ssadr::testing::svpg_oracle;

namespace {

std::vector<Particle> particles_at(const std::vector<std::vector<double>>& locs,
                                   double sigma = 0.05) {
  std::vector<Particle> out;
  for (const auto& l : locs) out.emplace_back(l, sigma);
  return out;
}

std::vector<std::vector<double>> locations(std::span<const Particle> ps) {
  std::vector<std::vector<double>> out;
  for (const auto& p : ps) out.push_back(p.location());
  return out;
}

// All parameters zero except the output bias.
Discriminator constant_discriminator(double logit, Rng& rng) {
  Discriminator d(6, DiscriminatorConfig{}, rng);
  auto p = d.net().parameters();
  std::fill(p.begin(), p.end(), 0.0);
  p.back() = logit;
  return d;
}

ddpg::Transition step_with(double tag, std::size_t sd, std::size_t ad) {
  ddpg::Transition t;
  t.state.assign(sd, tag);
  t.action.assign(ad, -tag);
  t.next_state.assign(sd, 0.0);
  return t;
}

}  // namespace

TEST_CASE("kernel fixtures and symmetry") {
  const std::vector<double> a{0.2, 0.4}, b{0.5, 0.0};
  CHECK(kernel(a, a, 0.3) == 1.0);
  const double d2 = 0.09 + 0.16;
  CHECK(kernel(a, b, d2) == doctest::Approx(std::exp(-1.0)));
  CHECK(kernel(a, b, d2) == doctest::Approx(0.3679).epsilon(1e-4));
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    const auto x = random_vector(3, rng, 0, 1), y = random_vector(3, rng, 0, 1);
    CHECK(kernel(x, y, 0.7) == kernel(y, x, 0.7));
  }
  CHECK_THROWS_AS(kernel(a, std::vector<double>{1.0}, 1.0), ArgumentError);
  CHECK_THROWS_AS(kernel(a, b, 0.0), ArgumentError);
}

TEST_CASE("particles clip their location and need a positive scale") {
  Particle p({-0.5, 0.5, 1.5}, 0.1);
  CHECK(p.location() == std::vector<double>{0.0, 0.5, 1.0});
  CHECK_THROWS_AS(Particle({0.5}, 0.0), ConfigError);
  SvpgConfig cfg;
  cfg.n_particles = 0;
  Rng rng(2);
  CHECK_THROWS_AS(make_particles(2, cfg, rng), ConfigError);
}

TEST_CASE("sampled parameters stay in the box and record the pre-clip score") {
  Rng rng(3);
  Particle p({0.02, 0.5, 0.97}, 0.2);
  for (int i = 0; i < 2000; ++i) {
    const auto s = sample_params(p, rng);
    for (std::size_t k = 0; k < 3; ++k) {
      CHECK(s.params.values()[k] >= 0.0);
      CHECK(s.params.values()[k] <= 1.0);
      CHECK(s.score[k] ==
            doctest::Approx((s.pre_clip[k] - p.location()[k]) / (0.2 * 0.2)));
    }
  }
}

TEST_CASE("tiny proposal scale returns the location") {
  Rng rng(4);
  Particle p({0.3, 0.6}, 1e-12);
  const auto s = sample_params(p, rng);
  CHECK(s.params.values()[0] == doctest::Approx(0.3).epsilon(1e-9));
  CHECK(s.params.values()[1] == doctest::Approx(0.6).epsilon(1e-9));
}

TEST_CASE("pre-clip sample mean matches the location") {
  Rng rng(5);
  const double sigma = 0.05;
  Particle p({0.4, 0.01}, sigma);
  constexpr int n = 100000;
  double m0 = 0.0, m1 = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto s = sample_params(p, rng);
    m0 += s.pre_clip[0];
    m1 += s.pre_clip[1];
  }
  const double tol = 3.0 * sigma / std::sqrt(static_cast<double>(n));
  CHECK(std::abs(m0 / n - 0.4) < tol);
  CHECK(std::abs(m1 / n - 0.01) < tol);
}

TEST_CASE("grad J estimate fixtures") {
  Particle p({0.5, 0.5}, 0.1);
  std::vector<ParticleEpisode> eps;
  CHECK_FALSE(estimate_grad_J(p, eps).has_value());
  eps.push_back({envs::EnvParams({0.4, 0.6}), {3.0, -2.0}, 5.0});
  const auto single = estimate_grad_J(p, eps).value();
  for (double v : single) CHECK(v == 0.0);
  eps.push_back({envs::EnvParams({0.6, 0.6}), {1.0, 4.0}, 5.0});
  const auto equal = estimate_grad_J(p, eps).value();
  for (double v : equal) CHECK(v == 0.0);
  eps[1].reward = 7.0;
  // mean r = 6: (-1)(3,-2) + (1)(1,4), halved.
  const auto g = *estimate_grad_J(p, eps);
  CHECK(g[0] == doctest::Approx(-1.0));
  CHECK(g[1] == doctest::Approx(3.0));
}

TEST_CASE("grad J estimate points toward the optimum of a quadratic") {
  Rng rng(6);
  const std::vector<double> c{0.8, 0.2};
  Particle p({0.4, 0.5}, 0.05);
  std::vector<ParticleEpisode> eps;
  for (int i = 0; i < 10000; ++i) {
    const auto s = sample_params(p, rng);
    double r = 0.0;
    for (std::size_t k = 0; k < 2; ++k) r -= std::pow(s.pre_clip[k] - c[k], 2);
    eps.push_back({s.params, s.score, r});
  }
  const auto g = *estimate_grad_J(p, eps);
  for (std::size_t k = 0; k < 2; ++k) {
    const double toward = c[k] - p.location()[k];
    CHECK(g[k] * toward > 0.0);
    // True gradient of E[r] is 2 (c - phi).
    CHECK(g[k] == doctest::Approx(2.0 * toward).epsilon(0.25));
  }
}

TEST_CASE("median bandwidth fixtures and relabeling symmetry") {
  CHECK(median_bandwidth(particles_at({{0.3, 0.3}})) == 1.0);
  CHECK(median_bandwidth(particles_at({{0.3, 0.3}, {0.3, 0.3}})) == 1.0);
  Rng rng(7);
  for (std::size_t n : {2u, 3u, 5u, 8u}) {
    std::vector<std::vector<double>> locs;
    for (std::size_t i = 0; i < n; ++i) locs.push_back(random_vector(3, rng, 0, 1));
    const double h = median_bandwidth(particles_at(locs));
    CHECK(h == doctest::Approx(median_oracle(locs)).epsilon(1e-12));
    for (int perm = 0; perm < 10; ++perm) {
      std::shuffle(locs.begin(), locs.end(), rng);
      CHECK(median_bandwidth(particles_at(locs)) == h);
    }
  }
}

TEST_CASE("svpg update matches the term-by-term oracle") {
  Rng rng(8);
  for (auto mode : {BandwidthMode::Fixed, BandwidthMode::Median}) {
    for (std::size_t n : {1u, 2u, 3u, 8u}) {
      CAPTURE(n);
      SvpgConfig cfg;
      cfg.n_particles = n;
      cfg.bandwidth_mode = mode;
      cfg.fixed_bandwidth = 0.35;
      cfg.temperature = 0.7;
      cfg.learning_rate = 0.05;
      std::vector<std::vector<double>> locs, grads;
      for (std::size_t i = 0; i < n; ++i) {
        locs.push_back(random_vector(2, rng, 0.2, 0.8));
        grads.push_back(random_vector(2, rng, -1, 1));
      }
      auto ps = particles_at(locs);
      const double h = svpg_update(ps, grads, cfg);
      const double h_expected = mode == BandwidthMode::Fixed ? 0.35
                                : n < 2                      ? 1.0
                                                             : median_oracle(locs);
      CHECK(h == doctest::Approx(h_expected).epsilon(1e-12));
      const auto expected = svpg_oracle(locs, grads, cfg.learning_rate, cfg.temperature, h);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c = 0; c < 2; ++c)
          CHECK(std::abs(ps[i].location()[c] - expected[i][c]) <= 1e-12);
    }
  }
}

TEST_CASE("three particles with hand-set gradients") {
  SvpgConfig cfg;
  cfg.bandwidth_mode = BandwidthMode::Fixed;
  cfg.fixed_bandwidth = 0.5;
  cfg.learning_rate = 0.1;
  cfg.temperature = 2.0;
  const std::vector<std::vector<double>> locs{{0.2, 0.3}, {0.5, 0.5}, {0.7, 0.1}};
  const std::vector<std::vector<double>> grads{{1.0, 0.0}, {0.0, -1.0}, {0.5, 0.5}};
  auto ps = particles_at(locs);
  svpg_update(ps, grads, cfg);
  const auto expected = svpg_oracle(locs, grads, 0.1, 2.0, 0.5);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t c = 0; c < 2; ++c)
      CHECK(std::abs(ps[i].location()[c] - expected[i][c]) <= 1e-12);
}

TEST_CASE("the kernel repulsion term is the kernel's gradient") {
  // Check the analytic d k / d phi_j used by the oracle against differences.
  Rng rng(9);
  const double h = 0.4;
  const auto a = random_vector(3, rng, 0, 1);
  const auto b = random_vector(3, rng, 0, 1);
  std::vector<double> analytic(3);
  const double k = kernel(a, b, h);
  for (int c = 0; c < 3; ++c) analytic[c] = k * 2.0 * (a[c] - b[c]) / h;
  auto f = [&](std::span<const double> x) { return kernel(a, x, h); };
  CHECK(check_gradient(f, b, analytic, 3, rng).max_rel_error <= kFdRelTol);
}

TEST_CASE("single particle takes a plain gradient step") {
  SvpgConfig cfg;
  cfg.learning_rate = 0.03;
  auto ps = particles_at({{0.4, 0.6}});
  const std::vector<std::vector<double>> grads{{2.0, -1.0}};
  svpg_update(ps, grads, cfg);
  CHECK(ps[0].location()[0] == doctest::Approx(0.4 + 0.03 * 2.0).epsilon(1e-14));
  CHECK(ps[0].location()[1] == doctest::Approx(0.6 - 0.03).epsilon(1e-14));
}

TEST_CASE("with zero gradients two particles repel") {
  SvpgConfig cfg;
  cfg.temperature = 1.0;
  cfg.learning_rate = 0.01;
  auto ps = particles_at({{0.45, 0.5}, {0.55, 0.5}});
  const std::vector<std::vector<double>> zero(2, std::vector<double>(2, 0.0));
  const double before = ps[1].location()[0] - ps[0].location()[0];
  svpg_update(ps, zero, cfg);
  CHECK(ps[0].location()[0] < 0.45);
  CHECK(ps[1].location()[0] > 0.55);
  CHECK(ps[1].location()[0] - ps[0].location()[0] > before);
}

TEST_CASE("equal gradients without repulsion move particles identically") {
  Rng rng(10);
  SvpgConfig cfg;
  cfg.temperature = 0.0;
  cfg.n_particles = 6;
  auto ps = make_particles(3, cfg, rng);
  for (auto& p : ps) p.set_location(random_vector(3, rng, 0.3, 0.7));
  const auto before = locations(ps);
  const std::vector<double> g{0.5, -0.25, 1.0};
  const std::vector<std::vector<double>> grads(6, g);
  svpg_update(ps, grads, cfg);
  std::vector<double> delta0(3);
  for (int c = 0; c < 3; ++c) delta0[c] = ps[0].location()[c] - before[0][c];
  for (std::size_t i = 0; i < 6; ++i) {
    for (int c = 0; c < 3; ++c) {
      const double delta = ps[i].location()[c] - before[i][c];
      CHECK(delta * g[c] > 0.0);
    }
  }
  // With a constant kernel (huge bandwidth) the steps are exactly equal.
  cfg.bandwidth_mode = BandwidthMode::Fixed;
  cfg.fixed_bandwidth = 1e300;
  auto qs = particles_at(before);
  svpg_update(qs, grads, cfg);
  for (std::size_t i = 0; i < 6; ++i)
    for (int c = 0; c < 3; ++c)
      CHECK((qs[i].location()[c] - before[i][c]) ==
            doctest::Approx(qs[0].location()[c] - before[0][c]).epsilon(1e-12));
}

TEST_CASE("locations stay in the unit box under large updates") {
  Rng rng(11);
  SvpgConfig cfg;
  cfg.n_particles = 8;
  cfg.learning_rate = 5.0;
  auto ps = make_particles(2, cfg, rng);
  for (int it = 0; it < 50; ++it) {
    std::vector<std::vector<double>> grads;
    for (std::size_t i = 0; i < ps.size(); ++i) grads.push_back(random_vector(2, rng, -10, 10));
    svpg_update(ps, grads, cfg);
    for (const auto& p : ps)
      for (double v : p.location()) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
      }
  }
  std::vector<std::vector<double>> short_grads(3, std::vector<double>(2));
  CHECK_THROWS_AS(svpg_update(ps, short_grads, cfg), ArgumentError);
}

TEST_CASE("trajectory features subsample ten steps with zero padding") {
  const std::size_t sd = 3, ad = 2, w = sd + ad;
  CHECK(feature_length(sd, ad) == kTrajectorySamples * w);
  CHECK_THROWS_AS(featurize_trajectory({}, sd, ad), ArgumentError);

  std::vector<ddpg::Transition> one{step_with(1.5, sd, ad)};
  const auto f1 = featurize_trajectory(one, sd, ad);
  REQUIRE(f1.size() == feature_length(sd, ad));
  for (std::size_t k = 0; k < sd; ++k) CHECK(f1[k] == 1.5);
  for (std::size_t k = sd; k < w; ++k) CHECK(f1[k] == -1.5);
  for (std::size_t k = w; k < f1.size(); ++k) CHECK(f1[k] == 0.0);

  std::vector<ddpg::Transition> ten;
  for (int i = 0; i < 10; ++i) ten.push_back(step_with(i + 1.0, sd, ad));
  const auto f10 = featurize_trajectory(ten, sd, ad);
  for (int i = 0; i < 10; ++i) CHECK(f10[i * w] == i + 1.0);

  std::vector<ddpg::Transition> long_traj;
  for (int i = 0; i < 100; ++i) long_traj.push_back(step_with(i, sd, ad));
  const auto f100 = featurize_trajectory(long_traj, sd, ad);
  CHECK(f100[0] == 0.0);
  CHECK(f100[9 * w] == 99.0);
  for (int i = 1; i < 10; ++i) CHECK(f100[i * w] > f100[(i - 1) * w]);
  CHECK(featurize_trajectory(long_traj, sd, ad) == f100);
}

TEST_CASE("discriminator reward fixtures") {
  Rng rng(12);
  const std::vector<double> x(6, 0.3);
  CHECK(discriminator_reward(constant_discriminator(60.0, rng), x) ==
        doctest::Approx(0.0));
  const double p = std::exp(-1.0);
  CHECK(discriminator_reward(constant_discriminator(std::log(p / (1 - p)), rng), x) ==
        doctest::Approx(-1.0));
  double prev = -std::numeric_limits<double>::infinity();
  for (double z = -20.0; z <= 20.0; z += 0.5) {
    const double r = discriminator_reward(constant_discriminator(z, rng), x);
    CHECK(r <= 0.0);
    CHECK(r > prev);
    prev = r;
  }
  Discriminator d(6, DiscriminatorConfig{}, rng);
  for (int i = 0; i < 100; ++i) {
    const auto f = random_vector(6, rng, -5, 5);
    CHECK(discriminator_reward(d, f) <= 0.0);
    CHECK(d.probability(f) > 0.0);
    CHECK(d.probability(f) < 1.0);
  }
}

TEST_CASE("discriminator loss gradient matches finite differences") {
  Rng rng(13);
  Discriminator d(feature_length(8, 2), DiscriminatorConfig{}, rng);
  std::vector<std::vector<double>> ref, rnd;
  for (int i = 0; i < 4; ++i) ref.push_back(random_vector(d.feature_length(), rng));
  for (int i = 0; i < 3; ++i) rnd.push_back(random_vector(d.feature_length(), rng));
  const auto g = d.loss_gradient(ref, rnd);
  Discriminator probe = d;
  auto f = [&](std::span<const double> p) {
    probe.net().set_parameters(p);
    return probe.loss(ref, rnd);
  };
  const std::vector<double> p(d.net().parameters().begin(), d.net().parameters().end());
  CHECK(check_gradient(f, p, g, 64, rng).max_rel_error <= kFdRelTol);
}

TEST_CASE("discriminator separates distinct clusters") {
  Rng rng(14);
  const std::size_t len = 6;
  Discriminator d(len, DiscriminatorConfig{}, rng);
  auto cluster = [&](double center, int n) {
    std::vector<std::vector<double>> out;
    for (int i = 0; i < n; ++i) {
      auto v = random_vector(len, rng, -0.3, 0.3);
      for (double& x : v) x += center;
      out.push_back(v);
    }
    return out;
  };
  for (int step = 0; step < 500; ++step) {
    const auto ref = cluster(-0.5, 16), rnd = cluster(0.5, 16);
    CHECK(std::isfinite(train_discriminator(d, ref, rnd)));
  }
  int correct = 0, total = 0;
  for (const auto& x : cluster(-0.5, 200)) correct += d.probability(x) < 0.5, ++total;
  for (const auto& x : cluster(0.5, 200)) correct += d.probability(x) > 0.5, ++total;
  CHECK(static_cast<double>(correct) / total > 0.9);
}

TEST_CASE("indistinguishable batches leave the loss near ln 2") {
  Rng rng(15);
  const std::size_t len = 6;
  Discriminator d(len, DiscriminatorConfig{}, rng);
  double late = 0.0;
  int counted = 0;
  for (int step = 0; step < 600; ++step) {
    std::vector<std::vector<double>> ref, rnd;
    for (int i = 0; i < 32; ++i) {
      ref.push_back(random_vector(len, rng));
      rnd.push_back(random_vector(len, rng));
    }
    const double loss = train_discriminator(d, ref, rnd);
    if (step >= 400) late += loss, ++counted;
  }
  CHECK(std::abs(late / counted - std::log(2.0)) < 0.05);
}

TEST_CASE("discriminator loss is finite on zero features") {
  Rng rng(16);
  Discriminator d(6, DiscriminatorConfig{}, rng);
  const std::vector<std::vector<double>> zeros(3, std::vector<double>(6, 0.0));
  CHECK(std::isfinite(train_discriminator(d, zeros, zeros)));
  CHECK(std::isfinite(d.loss(zeros, zeros)));
}
