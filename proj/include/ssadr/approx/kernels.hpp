#pragma once

#include <cstddef>
#include <span>

namespace ssadr::approx::kernels {

// Row-major dense layer over a batch: in is batch x fan_in, w is
// fan_in x fan_out, out and delta are batch x fan_out.
struct DenseShape {
  std::size_t batch;
  std::size_t fan_in;
  std::size_t fan_out;
};

// Each kernel has a serial reference and an OpenMP version. Work is split
// only across independent output elements and every element is accumulated
// in the same order, so both produce bit-identical results.

namespace serial {
// out = in * w + bias
void dense_forward(std::span<const double> in, std::span<const double> w,
                   std::span<const double> bias, std::span<double> out,
                   DenseShape shape);
// grad_w += in^T * delta, grad_b += column sums of delta
void dense_backward_params(std::span<const double> in,
                           std::span<const double> delta,
                           std::span<double> grad_w, std::span<double> grad_b,
                           DenseShape shape);
// grad_in = delta * w^T
void dense_backward_input(std::span<const double> w,
                          std::span<const double> delta,
                          std::span<double> grad_in, DenseShape shape);
}  // namespace serial

namespace parallel {
void dense_forward(std::span<const double> in, std::span<const double> w,
                   std::span<const double> bias, std::span<double> out,
                   DenseShape shape);
void dense_backward_params(std::span<const double> in,
                           std::span<const double> delta,
                           std::span<double> grad_w, std::span<double> grad_b,
                           DenseShape shape);
void dense_backward_input(std::span<const double> w,
                          std::span<const double> delta,
                          std::span<double> grad_in, DenseShape shape);
}  // namespace parallel

enum class Backend { Serial, Parallel };

// Process-wide kernel selection used by Approximator. Defaults to Parallel
// when built with OpenMP.
void set_backend(Backend backend);
Backend backend();
bool parallel_available();

void dense_forward(std::span<const double> in, std::span<const double> w,
                   std::span<const double> bias, std::span<double> out,
                   DenseShape shape);
void dense_backward_params(std::span<const double> in,
                           std::span<const double> delta,
                           std::span<double> grad_w, std::span<double> grad_b,
                           DenseShape shape);
void dense_backward_input(std::span<const double> w,
                          std::span<const double> delta,
                          std::span<double> grad_in, DenseShape shape);

}  // namespace ssadr::approx::kernels
