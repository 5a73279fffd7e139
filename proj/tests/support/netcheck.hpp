#pragma once

#include <span>
#include <utility>
#include <vector>

#include "ssadr/approx/approximator.hpp"
#include "support/gradcheck.hpp"

namespace ssadr::testing {

using approx::Approximator;
using approx::Matrix;
using approx::Upstream;

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// FD check of d(upstream . f(x)) / d(params) for a single input.
inline double fd_single(const Approximator& f, Rng& rng, Upstream where = Upstream::Output) {
  const auto x = random_vector(f.input_size(), rng);
  const auto u = random_vector(f.output_size(), rng);
  const auto g = f.gradient(x, u, where);
  Approximator probe = f;
  auto objective = [&](std::span<const double> p) {
    probe.set_parameters(p);
    const auto y = where == Upstream::Output ? probe.forward(x)
                                             : probe.forward_preactivation(x);
    return dot(u, y);
  };
  const std::vector<double> p(f.parameters().begin(), f.parameters().end());
  return check_gradient(objective, p, g, 64, rng).max_rel_error;
}

// FD check of the batched backward pass, parameters and inputs.
inline std::pair<double, double> fd_batch(const Approximator& f, Rng& rng) {
  const std::size_t batch = 5;
  Matrix x(batch, f.input_size());
  Matrix u(batch, f.output_size());
  x.data = random_vector(x.data.size(), rng);
  u.data = random_vector(u.data.size(), rng);
  Approximator::Tape tape;
  f.forward_batch(x, &tape);
  std::vector<double> grad(f.parameter_count(), 0.0);
  Matrix gin;
  f.backward(tape, u, grad, &gin);

  Approximator probe = f;
  auto by_params = [&](std::span<const double> p) {
    probe.set_parameters(p);
    return dot(u.data, probe.forward_batch(x).data);
  };
  const std::vector<double> p(f.parameters().begin(), f.parameters().end());
  const double e_params = check_gradient(by_params, p, grad, 64, rng).max_rel_error;

  auto by_input = [&](std::span<const double> xs) {
    Matrix xm(batch, f.input_size());
    xm.data.assign(xs.begin(), xs.end());
    return dot(u.data, f.forward_batch(xm).data);
  };
  const double e_input = check_gradient(by_input, x.data, gin.data, 64, rng).max_rel_error;
  return {e_params, e_input};
}

}  // namespace ssadr::testing
