#include "ssadr/approx/kernels.hpp"

#include <algorithm>
#include <atomic>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ssadr::approx::kernels {

namespace {

// Shared inner loops: both backends call exactly these, which keeps the
// floating-point operation order identical.

inline void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) y[j] += a * x[j];
}

inline double dot(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
#pragma omp simd reduction(+ : s)
  for (std::size_t j = 0; j < n; ++j) s += x[j] * y[j];
  return s;
}

inline void forward_row(const double* in, const double* w, const double* bias,
                        double* out, std::size_t fan_in, std::size_t fan_out) {
  std::copy(bias, bias + fan_out, out);
  for (std::size_t i = 0; i < fan_in; ++i) {
    const double x = in[i];
    if (x != 0.0) axpy(x, w + i * fan_out, out, fan_out);
  }
}

inline void grad_w_row(std::size_t i, const double* in, const double* delta,
                       double* grad_w, DenseShape s) {
  double* row = grad_w + i * s.fan_out;
  for (std::size_t b = 0; b < s.batch; ++b) {
    const double x = in[b * s.fan_in + i];
    if (x != 0.0) axpy(x, delta + b * s.fan_out, row, s.fan_out);
  }
}

inline void grad_b_all(const double* delta, double* grad_b, DenseShape s) {
  for (std::size_t b = 0; b < s.batch; ++b)
    axpy(1.0, delta + b * s.fan_out, grad_b, s.fan_out);
}

inline void grad_in_row(std::size_t b, const double* w, const double* delta,
                        double* grad_in, DenseShape s) {
  const double* d = delta + b * s.fan_out;
  double* g = grad_in + b * s.fan_in;
  for (std::size_t i = 0; i < s.fan_in; ++i)
    g[i] = dot(w + i * s.fan_out, d, s.fan_out);
}

// Below this many multiply-adds, thread start-up costs more than it saves.
constexpr std::size_t kParallelThreshold = 1 << 14;

bool worth_parallel(DenseShape s) {
  return s.batch * s.fan_in * s.fan_out >= kParallelThreshold;
}

std::atomic<Backend> g_backend{
#ifdef _OPENMP
    Backend::Parallel
#else
    Backend::Serial
#endif
};

}  // namespace

namespace serial {

void dense_forward(std::span<const double> in, std::span<const double> w,
                   std::span<const double> bias, std::span<double> out,
                   DenseShape s) {
  for (std::size_t b = 0; b < s.batch; ++b)
    forward_row(in.data() + b * s.fan_in, w.data(), bias.data(),
                out.data() + b * s.fan_out, s.fan_in, s.fan_out);
}

void dense_backward_params(std::span<const double> in,
                           std::span<const double> delta,
                           std::span<double> grad_w, std::span<double> grad_b,
                           DenseShape s) {
  for (std::size_t i = 0; i < s.fan_in; ++i)
    grad_w_row(i, in.data(), delta.data(), grad_w.data(), s);
  grad_b_all(delta.data(), grad_b.data(), s);
}

void dense_backward_input(std::span<const double> w,
                          std::span<const double> delta,
                          std::span<double> grad_in, DenseShape s) {
  for (std::size_t b = 0; b < s.batch; ++b)
    grad_in_row(b, w.data(), delta.data(), grad_in.data(), s);
}

}  // namespace serial

namespace parallel {

void dense_forward(std::span<const double> in, std::span<const double> w,
                   std::span<const double> bias, std::span<double> out,
                   DenseShape s) {
  const auto batch = static_cast<long>(s.batch);
#pragma omp parallel for schedule(static) if (worth_parallel(s))
  for (long b = 0; b < batch; ++b)
    forward_row(in.data() + b * s.fan_in, w.data(), bias.data(),
                out.data() + b * s.fan_out, s.fan_in, s.fan_out);
}

void dense_backward_params(std::span<const double> in,
                           std::span<const double> delta,
                           std::span<double> grad_w, std::span<double> grad_b,
                           DenseShape s) {
  const auto fan_in = static_cast<long>(s.fan_in);
#pragma omp parallel for schedule(static) if (worth_parallel(s))
  for (long i = 0; i < fan_in; ++i)
    grad_w_row(static_cast<std::size_t>(i), in.data(), delta.data(),
               grad_w.data(), s);
  grad_b_all(delta.data(), grad_b.data(), s);
}

void dense_backward_input(std::span<const double> w,
                          std::span<const double> delta,
                          std::span<double> grad_in, DenseShape s) {
  const auto batch = static_cast<long>(s.batch);
#pragma omp parallel for schedule(static) if (worth_parallel(s))
  for (long b = 0; b < batch; ++b)
    grad_in_row(static_cast<std::size_t>(b), w.data(), delta.data(),
                grad_in.data(), s);
}

}  // namespace parallel

void set_backend(Backend b) {
  g_backend.store(parallel_available() ? b : Backend::Serial);
}

Backend backend() { return g_backend.load(); }

bool parallel_available() {
#ifdef _OPENMP
  return true;
#else
  return false;
#endif
}

void dense_forward(std::span<const double> in, std::span<const double> w,
                   std::span<const double> bias, std::span<double> out,
                   DenseShape s) {
  if (backend() == Backend::Parallel)
    parallel::dense_forward(in, w, bias, out, s);
  else
    serial::dense_forward(in, w, bias, out, s);
}

void dense_backward_params(std::span<const double> in,
                           std::span<const double> delta,
                           std::span<double> grad_w, std::span<double> grad_b,
                           DenseShape s) {
  if (backend() == Backend::Parallel)
    parallel::dense_backward_params(in, delta, grad_w, grad_b, s);
  else
    serial::dense_backward_params(in, delta, grad_w, grad_b, s);
}

void dense_backward_input(std::span<const double> w,
                          std::span<const double> delta,
                          std::span<double> grad_in, DenseShape s) {
  if (backend() == Backend::Parallel)
    parallel::dense_backward_input(w, delta, grad_in, s);
  else
    serial::dense_backward_input(w, delta, grad_in, s);
}

}  // namespace ssadr::approx::kernels
