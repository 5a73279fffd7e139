#include "ssadr/approx/adam.hpp"

#include <cmath>
#include <string>

#include "ssadr/errors.hpp"

namespace ssadr::approx {

Adam::Adam(std::size_t n_params, AdamConfig config)
    : config_(config), m_(n_params, 0.0), v_(n_params, 0.0) {}

void Adam::step(std::span<double> params, std::span<const double> grad) {
  if (params.size() != m_.size() || grad.size() != m_.size())
    throw ArgumentError("adam: expected " + std::to_string(m_.size()) +
                        " params/grads, got " + std::to_string(params.size()) +
                        "/" + std::to_string(grad.size()));
  for (std::size_t i = 0; i < grad.size(); ++i)
    if (!std::isfinite(grad[i]))
      throw NumericError("adam: non-finite gradient component " +
                         std::to_string(i) + " at step " +
                         std::to_string(t_ + 1));
  ++t_;
  beta1_pow_ *= config_.beta1;
  beta2_pow_ *= config_.beta2;
  const double c1 = 1.0 - beta1_pow_;
  const double c2 = 1.0 - beta2_pow_;
  const double b1 = config_.beta1, b2 = config_.beta2;
  for (std::size_t i = 0; i < grad.size(); ++i) {
    const double g = grad[i];
    m_[i] = b1 * m_[i] + (1.0 - b1) * g;
    v_[i] = b2 * v_[i] + (1.0 - b2) * g * g;
    const double m_hat = m_[i] / c1;
    const double v_hat = v_[i] / c2;
    params[i] -= config_.learning_rate * m_hat / (std::sqrt(v_hat) + config_.epsilon);
  }
}

}  // namespace ssadr::approx
