#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ssadr/envs/randomization_space.hpp"
#include "ssadr/rng.hpp"

namespace ssadr::adr {

enum class BandwidthMode { Median, Fixed };

struct SvpgConfig {
  std::size_t n_particles = 10;
  double learning_rate = 0.03;  // epsilon
  double temperature = 10.0;    // alpha
  BandwidthMode bandwidth_mode = BandwidthMode::Median;
  double fixed_bandwidth = 1.0;
  double proposal_sigma = 0.05;
  // Episodes gathered per particle before each interacting update.
  std::size_t episodes_per_particle = 4;
};

// A Gaussian proposal over normalized parameter space whose mean is the
// trainable location.
class Particle {
 public:
  Particle(std::vector<double> location, double proposal_sigma);

  const std::vector<double>& location() const { return location_; }
  // Clipped to [0, 1]^d.
  void set_location(std::vector<double> location);
  double proposal_sigma() const { return sigma_; }

  double return_estimate() const { return return_estimate_; }
  void set_return_estimate(double j) { return_estimate_ = j; }

 private:
  std::vector<double> location_;
  double sigma_;
  double return_estimate_ = 0.0;
};

struct ParticleSample {
  envs::EnvParams params;      // clipped to [0, 1]
  std::vector<double> pre_clip;
  // d/d(location) log N(pre_clip; location, sigma^2 I)
  std::vector<double> score;
};

ParticleSample sample_params(const Particle& p, Rng& rng);

// exp(-|a - b|^2 / h)
double kernel(std::span<const double> a, std::span<const double> b, double h);

// median of pairwise squared distances over log(N + 1); 1.0 when fewer than
// two particles or all coincide.
double median_bandwidth(std::span<const Particle> particles);

struct ParticleEpisode {
  envs::EnvParams params;
  std::vector<double> score;
  double reward = 0.0;
};

// Score-function estimate of grad J: mean of (r - mean r) * score. nullopt for
// an empty batch.
std::optional<std::vector<double>> estimate_grad_J(
    const Particle& p, std::span<const ParticleEpisode> episodes);

// Interacting update
//   phi_i += eps/N sum_j [ grad_j k(phi_i, phi_j)
//                          + alpha grad_{phi_j} k(phi_i, phi_j) ]
// applied simultaneously to every particle, then clipped to the unit box.
// Returns the bandwidth used.
double svpg_update(std::span<Particle> particles,
                   std::span<const std::vector<double>> grads,
                   const SvpgConfig& cfg);

// Particles at independent uniform locations.
std::vector<Particle> make_particles(std::size_t n_dims, const SvpgConfig& cfg,
                                     Rng& rng);

}  // namespace ssadr::adr
