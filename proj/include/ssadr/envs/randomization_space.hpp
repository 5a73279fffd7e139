#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace ssadr::envs {

enum class EnvKind { Reacher, Pusher };

// Calibrated ranges are the hand-tuned training box; uncalibrated ranges
// extend the lower end into parameters where the task becomes unsolvable.
enum class RangeMode { Calibrated, Uncalibrated };

std::string_view to_string(EnvKind kind);
std::string_view to_string(RangeMode mode);
EnvKind parse_env_kind(std::string_view name);
RangeMode parse_range_mode(std::string_view name);

std::size_t n_rand(EnvKind kind);

// A point in normalized coordinates of a randomization space. Components are
// clipped to [0, 1] on construction.
class EnvParams {
 public:
  EnvParams() = default;
  explicit EnvParams(std::vector<double> normalized);

  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

  friend bool operator==(const EnvParams&, const EnvParams&) = default;

 private:
  std::vector<double> values_;
};

// Axis-aligned box of simulator parameters in physical units, with the
// reference point that defines the default environment.
class RandomizationSpace {
 public:
  RandomizationSpace(std::vector<double> lower, std::vector<double> upper,
                     std::vector<double> reference);

  static RandomizationSpace for_env(EnvKind kind,
                                    RangeMode mode = RangeMode::Calibrated);

  std::size_t n_dims() const { return lower_.size(); }
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }
  const std::vector<double>& reference() const { return reference_; }

  std::vector<double> denormalize(const EnvParams& params) const;
  // Inverse of denormalize; the result is clipped into the box.
  EnvParams normalize(std::span<const double> physical) const;
  EnvParams reference_params() const { return normalize(reference_); }

  bool contains(std::span<const double> physical) const;

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<double> reference_;
};

}  // namespace ssadr::envs
