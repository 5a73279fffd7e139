#include "ssadr/approx/approximator.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "ssadr/approx/kernels.hpp"
#include "ssadr/errors.hpp"

namespace ssadr::approx {

namespace {

double apply_head(Activation a, double z) {
  switch (a) {
    case Activation::Tanh:
      return std::tanh(z);
    case Activation::Sigmoid:
      return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z))
                      : std::exp(z) / (1.0 + std::exp(z));
    case Activation::Identity:
      break;
  }
  return z;
}

// Derivative of the head expressed through its output y.
double head_slope(Activation a, double y) {
  switch (a) {
    case Activation::Tanh:
      return 1.0 - y * y;
    case Activation::Sigmoid:
      return y * (1.0 - y);
    case Activation::Identity:
      break;
  }
  return 1.0;
}

void check_sizes(std::span<const std::size_t> sizes) {
  if (sizes.size() < 2) throw ConfigError("approximator needs >= 2 layer sizes");
  for (std::size_t s : sizes)
    if (s == 0) throw ConfigError("approximator layer sizes must be positive");
}

}  // namespace

std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::Tanh:
      return "tanh";
    case Activation::Sigmoid:
      return "sigmoid";
    case Activation::Identity:
      break;
  }
  return "identity";
}

Activation parse_activation(std::string_view name) {
  if (name == "identity") return Activation::Identity;
  if (name == "tanh") return Activation::Tanh;
  if (name == "sigmoid") return Activation::Sigmoid;
  throw ConfigError("unknown activation '" + std::string(name) + "'");
}

std::size_t Approximator::parameter_count(
    std::span<const std::size_t> sizes) {
  std::size_t n = 0;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l)
    n += (sizes[l] + 1) * sizes[l + 1];
  return n;
}

Approximator::Approximator(std::vector<std::size_t> layer_sizes,
                           Activation output, std::vector<double> parameters)
    : sizes_(std::move(layer_sizes)), head_(output), params_(std::move(parameters)) {
  check_sizes(sizes_);
  if (params_.size() != parameter_count(sizes_))
    throw ConfigError("approximator expects " +
                      std::to_string(parameter_count(sizes_)) +
                      " parameters, got " + std::to_string(params_.size()));
  std::size_t off = 0;
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    offsets_.push_back(off);
    off += (sizes_[l] + 1) * sizes_[l + 1];
  }
}

Approximator::Approximator(std::vector<std::size_t> layer_sizes,
                           Activation output, Rng& rng)
    : Approximator(layer_sizes, output,
                   std::vector<double>(parameter_count(layer_sizes))) {
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(sizes_[l]));
    std::uniform_real_distribution<double> dist(-bound, bound);
    const std::size_t begin = offsets_[l];
    const std::size_t end = begin + (sizes_[l] + 1) * sizes_[l + 1];
    for (std::size_t k = begin; k < end; ++k) params_[k] = dist(rng);
  }
}

void Approximator::set_parameters(std::span<const double> p) {
  if (p.size() != params_.size())
    throw ArgumentError("set_parameters: expected " +
                        std::to_string(params_.size()) + " values, got " +
                        std::to_string(p.size()));
  std::copy(p.begin(), p.end(), params_.begin());
}

Matrix Approximator::forward_batch(const Matrix& x, Tape* tape) const {
  if (x.cols != input_size())
    throw ArgumentError("forward: input width " + std::to_string(x.cols) +
                        ", expected " + std::to_string(input_size()));
  const std::size_t n_layers = sizes_.size() - 1;
  if (tape) tape->inputs.clear();
  Matrix current = x;
  for (std::size_t l = 0; l < n_layers; ++l) {
    const kernels::DenseShape shape{x.rows, sizes_[l], sizes_[l + 1]};
    const std::size_t w_size = sizes_[l] * sizes_[l + 1];
    std::span<const double> w(params_.data() + offsets_[l], w_size);
    std::span<const double> b(params_.data() + offsets_[l] + w_size,
                              sizes_[l + 1]);
    Matrix next(x.rows, sizes_[l + 1]);
    kernels::dense_forward(current.data, w, b, next.data, shape);
    if (tape) tape->inputs.push_back(std::move(current));
    if (l + 1 < n_layers) {
      for (double& v : next.data) v = v > 0.0 ? v : 0.0;
      current = std::move(next);
    } else {
      if (tape) tape->output_pre = next;
      for (double& v : next.data) v = apply_head(head_, v);
      if (tape) tape->output = next;
      return next;
    }
  }
  return current;
}

void Approximator::backward(const Tape& tape, const Matrix& upstream,
                            std::span<double> grad, Matrix* input_grad,
                            Upstream where) const {
  const std::size_t n_layers = sizes_.size() - 1;
  const std::size_t batch = tape.output.rows;
  if (upstream.rows != batch || upstream.cols != output_size())
    throw ArgumentError("backward: upstream shape mismatch");
  const bool want_params = !grad.empty();
  if (want_params && grad.size() != params_.size())
    throw ArgumentError("backward: gradient buffer has wrong length");

  Matrix delta = upstream;
  if (where == Upstream::Output)
    for (std::size_t k = 0; k < delta.data.size(); ++k)
      delta.data[k] *= head_slope(head_, tape.output.data[k]);

  for (std::size_t l = n_layers; l-- > 0;) {
    const kernels::DenseShape shape{batch, sizes_[l], sizes_[l + 1]};
    const std::size_t w_size = sizes_[l] * sizes_[l + 1];
    std::span<const double> w(params_.data() + offsets_[l], w_size);
    const Matrix& in = tape.inputs[l];
    if (want_params) {
      std::span<double> gw(grad.data() + offsets_[l], w_size);
      std::span<double> gb(grad.data() + offsets_[l] + w_size, sizes_[l + 1]);
      kernels::dense_backward_params(in.data, delta.data, gw, gb, shape);
    }
    if (l == 0 && !input_grad) break;
    Matrix prev(batch, sizes_[l]);
    kernels::dense_backward_input(w, delta.data, prev.data, shape);
    if (l == 0) {
      *input_grad = std::move(prev);
      break;
    }
    // Rectifier derivative: the layer input is this layer's post-activation.
    for (std::size_t k = 0; k < prev.data.size(); ++k)
      if (!(in.data[k] > 0.0)) prev.data[k] = 0.0;
    delta = std::move(prev);
  }
}

std::vector<double> Approximator::forward(std::span<const double> x) const {
  Matrix in(1, x.size());
  std::copy(x.begin(), x.end(), in.data.begin());
  return forward_batch(in).data;
}

std::vector<double> Approximator::forward_preactivation(
    std::span<const double> x) const {
  Matrix in(1, x.size());
  std::copy(x.begin(), x.end(), in.data.begin());
  Tape tape;
  forward_batch(in, &tape);
  return tape.output_pre.data;
}

std::vector<double> Approximator::gradient(std::span<const double> x,
                                           std::span<const double> upstream,
                                           Upstream where) const {
  if (upstream.size() != output_size())
    throw ArgumentError("gradient: upstream length " +
                        std::to_string(upstream.size()) + ", expected " +
                        std::to_string(output_size()));
  Matrix in(1, x.size());
  std::copy(x.begin(), x.end(), in.data.begin());
  Tape tape;
  forward_batch(in, &tape);
  Matrix up(1, upstream.size());
  std::copy(upstream.begin(), upstream.end(), up.data.begin());
  std::vector<double> grad(params_.size(), 0.0);
  backward(tape, up, grad, nullptr, where);
  return grad;
}

void save(std::ostream& out, const Approximator& f) {
  out << "ssadr-approximator 1\n";
  out << "layers " << f.layer_sizes().size();
  for (std::size_t s : f.layer_sizes()) out << ' ' << s;
  out << "\nhidden relu\noutput " << to_string(f.output_activation()) << '\n';
  out << "params " << f.parameter_count() << '\n';
  out << std::hexfloat;
  for (double p : f.parameters()) out << p << '\n';
  out << std::defaultfloat << "end\n";
}

Approximator load(std::istream& in) {
  auto fail = [](const std::string& what) {
    return ConfigError("approximator checkpoint: " + what);
  };
  std::string tag;
  int version = 0;
  if (!(in >> tag >> version) || tag != "ssadr-approximator")
    throw fail("bad header");
  if (version != 1) throw fail("unsupported version " + std::to_string(version));
  std::size_t n_layers = 0;
  if (!(in >> tag >> n_layers) || tag != "layers" || n_layers < 2)
    throw fail("bad layers line");
  std::vector<std::size_t> sizes(n_layers);
  for (auto& s : sizes)
    if (!(in >> s)) throw fail("truncated layer sizes");
  std::string hidden, head;
  if (!(in >> tag >> hidden) || tag != "hidden" || hidden != "relu")
    throw fail("bad hidden activation");
  if (!(in >> tag >> head) || tag != "output") throw fail("bad output line");
  std::size_t count = 0;
  if (!(in >> tag >> count) || tag != "params") throw fail("bad params line");
  std::vector<double> params(count);
  std::string token;
  for (auto& p : params) {
    if (!(in >> token)) throw fail("truncated parameters");
    char* end = nullptr;
    p = std::strtod(token.c_str(), &end);
    if (end == token.c_str() || *end != '\0') throw fail("bad number " + token);
  }
  if (!(in >> tag) || tag != "end") throw fail("missing end marker");
  return Approximator{std::move(sizes), parse_activation(head),
                      std::move(params)};
}

void save_file(const std::string& path, const Approximator& f) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  save(out, f);
}

Approximator load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path);
  return load(in);
}

}  // namespace ssadr::approx
