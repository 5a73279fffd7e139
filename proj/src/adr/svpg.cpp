#include "ssadr/adr/svpg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ssadr/errors.hpp"

namespace ssadr::adr {

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double d2 = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double diff = a[k] - b[k];
    d2 += diff * diff;
  }
  return d2;
}

}  // namespace

Particle::Particle(std::vector<double> location, double proposal_sigma)
    : sigma_(proposal_sigma) {
  if (!(proposal_sigma > 0.0))
    throw ConfigError("particle proposal sigma must be positive");
  set_location(std::move(location));
}

void Particle::set_location(std::vector<double> location) {
  for (double& v : location) v = std::clamp(v, 0.0, 1.0);
  location_ = std::move(location);
}

ParticleSample sample_params(const Particle& p, Rng& rng) {
  const auto& mu = p.location();
  const double sigma = p.proposal_sigma();
  ParticleSample s;
  s.pre_clip.resize(mu.size());
  s.score.resize(mu.size());
  for (std::size_t k = 0; k < mu.size(); ++k) {
    const double z = standard_normal(rng);
    s.pre_clip[k] = mu[k] + sigma * z;
    s.score[k] = (s.pre_clip[k] - mu[k]) / (sigma * sigma);
  }
  s.params = envs::EnvParams{s.pre_clip};
  return s;
}

double kernel(std::span<const double> a, std::span<const double> b, double h) {
  if (a.size() != b.size()) throw ArgumentError("kernel: length mismatch");
  if (!(h > 0.0)) throw ArgumentError("kernel: bandwidth must be positive");
  return std::exp(-squared_distance(a, b) / h);
}

double median_bandwidth(std::span<const Particle> particles) {
  const std::size_t n = particles.size();
  if (n < 2) return 1.0;
  std::vector<double> d2;
  d2.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      d2.push_back(
          squared_distance(particles[i].location(), particles[j].location()));
  std::sort(d2.begin(), d2.end());
  const std::size_t m = d2.size();
  const double med = m % 2 ? d2[m / 2] : 0.5 * (d2[m / 2 - 1] + d2[m / 2]);
  if (!(med > 0.0)) return 1.0;
  return med / std::log(static_cast<double>(n) + 1.0);
}

std::optional<std::vector<double>> estimate_grad_J(
    const Particle& p, std::span<const ParticleEpisode> episodes) {
  if (episodes.empty()) return std::nullopt;
  const std::size_t d = p.location().size();
  double mean_r = 0.0;
  for (const auto& e : episodes) mean_r += e.reward;
  mean_r /= static_cast<double>(episodes.size());
  std::vector<double> g(d, 0.0);
  for (const auto& e : episodes) {
    if (e.score.size() != d) throw ArgumentError("estimate_grad_J: score length");
    const double adv = e.reward - mean_r;
    for (std::size_t k = 0; k < d; ++k) g[k] += adv * e.score[k];
  }
  for (double& v : g) v /= static_cast<double>(episodes.size());
  return g;
}

double svpg_update(std::span<Particle> particles,
                   std::span<const std::vector<double>> grads,
                   const SvpgConfig& cfg) {
  const std::size_t n = particles.size();
  if (grads.size() != n)
    throw ArgumentError("svpg_update: " + std::to_string(grads.size()) +
                        " gradients for " + std::to_string(n) + " particles");
  if (n == 0) return 1.0;
  const double h = cfg.bandwidth_mode == BandwidthMode::Median
                       ? median_bandwidth(particles)
                       : cfg.fixed_bandwidth;
  const std::size_t d = particles[0].location().size();
  const double scale = cfg.learning_rate / static_cast<double>(n);

  std::vector<std::vector<double>> next(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& phi_i = particles[i].location();
    std::vector<double> step(d, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      const auto& phi_j = particles[j].location();
      const double k = kernel(phi_i, phi_j, h);
      for (std::size_t c = 0; c < d; ++c)
        step[c] += grads[j][c] * k +
                   cfg.temperature * (2.0 / h) * (phi_i[c] - phi_j[c]) * k;
    }
    next[i] = phi_i;
    for (std::size_t c = 0; c < d; ++c) next[i][c] += scale * step[c];
  }
  for (std::size_t i = 0; i < n; ++i) particles[i].set_location(std::move(next[i]));
  return h;
}

std::vector<Particle> make_particles(std::size_t n_dims, const SvpgConfig& cfg,
                                     Rng& rng) {
  if (cfg.n_particles == 0) throw ConfigError("svpg needs at least one particle");
  std::vector<Particle> out;
  for (std::size_t i = 0; i < cfg.n_particles; ++i) {
    std::vector<double> loc(n_dims);
    for (double& v : loc) v = uniform01(rng);
    out.emplace_back(std::move(loc), cfg.proposal_sigma);
  }
  return out;
}

}  // namespace ssadr::adr
