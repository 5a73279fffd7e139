#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ssadr::approx {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Bias-corrected adaptive-moment optimizer for one parameter vector.
class Adam {
 public:
  Adam() = default;
  Adam(std::size_t n_params, AdamConfig config = {});

  // Throws NumericError naming the first non-finite gradient component; the
  // parameters and moments are left untouched in that case.
  void step(std::span<double> params, std::span<const double> grad);

  const AdamConfig& config() const { return config_; }
  void set_learning_rate(double lr) { config_.learning_rate = lr; }
  const std::vector<double>& first_moment() const { return m_; }
  const std::vector<double>& second_moment() const { return v_; }
  std::size_t steps() const { return t_; }

 private:
  AdamConfig config_;
  std::vector<double> m_;
  std::vector<double> v_;
  std::size_t t_ = 0;
  double beta1_pow_ = 1.0;
  double beta2_pow_ = 1.0;
};

}  // namespace ssadr::approx
