#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ssadr/rng.hpp"

namespace ssadr::approx {

// Output head. Hidden layers are always rectifiers.
enum class Activation { Identity, Tanh, Sigmoid };

std::string_view to_string(Activation a);
Activation parse_activation(std::string_view name);

// Dense row-major batch of vectors.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const {
    return data[r * cols + c];
  }
  std::span<double> row(std::size_t r) { return {data.data() + r * cols, cols}; }
  std::span<const double> row(std::size_t r) const {
    return {data.data() + r * cols, cols};
  }
};

// Where backward() receives its upstream signal: on the activated output, or
// directly on the output pre-activation (logit), which skips the head's
// derivative and stays exact where the head saturates.
enum class Upstream { Output, PreActivation };

// Multi-layer perceptron with analytic gradients. Parameters are one flat
// vector; for each layer, a fan_in x fan_out row-major weight block followed
// by fan_out biases.
class Approximator {
 public:
  // Saved activations of one forward pass, consumed by backward().
  struct Tape {
    std::vector<Matrix> inputs;  // input to each layer (post-activation)
    Matrix output_pre;           // last layer pre-activation
    Matrix output;               // after the head
  };

  Approximator() = default;
  // Weights and biases uniform in +-1/sqrt(fan_in).
  Approximator(std::vector<std::size_t> layer_sizes, Activation output,
               Rng& rng);
  Approximator(std::vector<std::size_t> layer_sizes, Activation output,
               std::vector<double> parameters);

  static std::size_t parameter_count(std::span<const std::size_t> layer_sizes);

  const std::vector<std::size_t>& layer_sizes() const { return sizes_; }
  std::size_t input_size() const { return sizes_.front(); }
  std::size_t output_size() const { return sizes_.back(); }
  Activation output_activation() const { return head_; }

  std::span<double> parameters() { return params_; }
  std::span<const double> parameters() const { return params_; }
  std::size_t parameter_count() const { return params_.size(); }
  void set_parameters(std::span<const double> p);

  std::vector<double> forward(std::span<const double> x) const;
  // Output before the head is applied.
  std::vector<double> forward_preactivation(std::span<const double> x) const;
  // d(upstream . f(x)) / d(parameters).
  std::vector<double> gradient(std::span<const double> x,
                               std::span<const double> upstream,
                               Upstream where = Upstream::Output) const;

  Matrix forward_batch(const Matrix& x, Tape* tape = nullptr) const;
  // Adds d(sum_b upstream_b . f(x_b)) / d(parameters) into `grad` and, if
  // requested, writes d/dx into `input_grad`. An empty `grad` skips the
  // parameter gradient.
  void backward(const Tape& tape, const Matrix& upstream,
                std::span<double> grad, Matrix* input_grad = nullptr,
                Upstream where = Upstream::Output) const;

  friend bool operator==(const Approximator&, const Approximator&) = default;

 private:
  std::size_t weight_offset(std::size_t layer) const { return offsets_[layer]; }

  std::vector<std::size_t> sizes_;
  std::vector<std::size_t> offsets_;
  Activation head_ = Activation::Identity;
  std::vector<double> params_;
};

// Versioned text blob: layer sizes, activation tags, then the flat parameter
// vector in hexadecimal floating point, so a save/load round trip is exact.
//
//   ssadr-approximator 1
//   layers <n> <size_0> ... <size_{n-1}>
//   hidden relu
//   output <identity|tanh|sigmoid>
//   params <count>
//   <one hexfloat per line>
//   end
void save(std::ostream& out, const Approximator& f);
Approximator load(std::istream& in);
void save_file(const std::string& path, const Approximator& f);
Approximator load_file(const std::string& path);

}  // namespace ssadr::approx
