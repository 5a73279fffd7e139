#include "ssadr/envs/randomization_space.hpp"

#include <algorithm>
#include <string>

#include "ssadr/errors.hpp"

namespace ssadr::envs {

std::string_view to_string(EnvKind kind) {
  return kind == EnvKind::Reacher ? "reacher" : "pusher";
}

std::string_view to_string(RangeMode mode) {
  return mode == RangeMode::Calibrated ? "calibrated" : "uncalibrated";
}

EnvKind parse_env_kind(std::string_view name) {
  if (name == "reacher") return EnvKind::Reacher;
  if (name == "pusher") return EnvKind::Pusher;
  throw ConfigError("unknown env '" + std::string(name) +
                    "' (valid: reacher, pusher)");
}

RangeMode parse_range_mode(std::string_view name) {
  if (name == "calibrated") return RangeMode::Calibrated;
  if (name == "uncalibrated") return RangeMode::Uncalibrated;
  throw ConfigError("unknown range mode '" + std::string(name) +
                    "' (valid: calibrated, uncalibrated)");
}

std::size_t n_rand(EnvKind kind) { return kind == EnvKind::Reacher ? 8 : 1; }

EnvParams::EnvParams(std::vector<double> normalized)
    : values_(std::move(normalized)) {
  for (double& v : values_) v = std::clamp(v, 0.0, 1.0);
}

RandomizationSpace::RandomizationSpace(std::vector<double> lower,
                                       std::vector<double> upper,
                                       std::vector<double> reference)
    : lower_(std::move(lower)),
      upper_(std::move(upper)),
      reference_(std::move(reference)) {
  if (lower_.empty()) throw ConfigError("randomization space has no dims");
  if (upper_.size() != lower_.size() || reference_.size() != lower_.size())
    throw ConfigError("randomization space bound lengths disagree");
  for (std::size_t i = 0; i < lower_.size(); ++i) {
    if (!(lower_[i] < upper_[i]))
      throw ConfigError("randomization space dim " + std::to_string(i) +
                        ": lower must be < upper");
    if (reference_[i] < lower_[i] || reference_[i] > upper_[i])
      throw ConfigError("randomization space dim " + std::to_string(i) +
                        ": reference outside bounds");
  }
}

RandomizationSpace RandomizationSpace::for_env(EnvKind kind, RangeMode mode) {
  const bool calibrated = mode == RangeMode::Calibrated;
  if (kind == EnvKind::Pusher) {
    // Puck friction. Below ~0.05 a pushed puck cannot be brought to rest on
    // target by a straight push (see hard_env_params).
    return {{calibrated ? 0.1 : 0.01}, {0.9}, {0.5}};
  }
  // Four joint gains (rad/step at full action), then four dampings.
  const double gain_lo = calibrated ? 0.005 : 0.001;
  const double damp_hi = calibrated ? 0.05 : 0.1;
  std::vector<double> lower, upper, reference;
  for (int j = 0; j < 4; ++j) {
    lower.push_back(gain_lo);
    upper.push_back(0.05);
    reference.push_back(0.03);
  }
  for (int j = 0; j < 4; ++j) {
    lower.push_back(0.0);
    upper.push_back(damp_hi);
    reference.push_back(0.01);
  }
  return {std::move(lower), std::move(upper), std::move(reference)};
}

std::vector<double> RandomizationSpace::denormalize(
    const EnvParams& params) const {
  if (params.size() != n_dims())
    throw ConfigError("params have " + std::to_string(params.size()) +
                      " dims, space has " + std::to_string(n_dims()));
  std::vector<double> out(n_dims());
  for (std::size_t i = 0; i < n_dims(); ++i)
    out[i] = lower_[i] + params[i] * (upper_[i] - lower_[i]);
  return out;
}

EnvParams RandomizationSpace::normalize(std::span<const double> physical) const {
  if (physical.size() != n_dims())
    throw ConfigError("physical params have " +
                      std::to_string(physical.size()) + " dims, space has " +
                      std::to_string(n_dims()));
  std::vector<double> out(n_dims());
  for (std::size_t i = 0; i < n_dims(); ++i)
    out[i] = (physical[i] - lower_[i]) / (upper_[i] - lower_[i]);
  return EnvParams{std::move(out)};
}

bool RandomizationSpace::contains(std::span<const double> physical) const {
  if (physical.size() != n_dims()) return false;
  for (std::size_t i = 0; i < n_dims(); ++i)
    if (physical[i] < lower_[i] || physical[i] > upper_[i]) return false;
  return true;
}

}  // namespace ssadr::envs
