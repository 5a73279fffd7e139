#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "ssadr/rng.hpp"

namespace ssadr::testing {

inline constexpr double kFdStep = 1e-5;
inline constexpr double kFdRelTol = 1e-4;
// Below this magnitude both gradients are treated as zero-ish and compared
// on an absolute scale.
inline constexpr double kFdFloor = 1e-7;

struct GradCheck {
  double max_rel_error = 0.0;
  std::size_t coords = 0;
};

inline double relative_error(double analytic, double numeric) {
  const double scale = std::max({std::abs(analytic), std::abs(numeric), kFdFloor});
  return std::abs(analytic - numeric) / scale;
}

// Central differences of `f` at `params` on `n_coords` random coordinates
// (all of them if there are fewer), compared against `analytic`.
inline GradCheck check_gradient(const std::function<double(std::span<const double>)>& f,
                                std::vector<double> params,
                                std::span<const double> analytic,
                                std::size_t n_coords, Rng& rng) {
  GradCheck out;
  std::vector<std::size_t> idx(params.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  if (n_coords < idx.size()) {
    for (std::size_t i = 0; i < n_coords; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, idx.size() - 1);
      std::swap(idx[i], idx[pick(rng)]);
    }
    idx.resize(n_coords);
  }
  for (std::size_t i : idx) {
    const double orig = params[i];
    params[i] = orig + kFdStep;
    const double up = f(params);
    params[i] = orig - kFdStep;
    const double down = f(params);
    params[i] = orig;
    const double numeric = (up - down) / (2.0 * kFdStep);
    out.max_rel_error = std::max(out.max_rel_error, relative_error(analytic[i], numeric));
    ++out.coords;
  }
  return out;
}

inline std::vector<double> random_vector(std::size_t n, Rng& rng, double lo = -1.0,
                                         double hi = 1.0) {
  std::vector<double> v(n);
  for (double& x : v) x = lo + (hi - lo) * uniform01(rng);
  return v;
}

}  // namespace ssadr::testing
