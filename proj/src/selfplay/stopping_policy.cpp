#include "ssadr/selfplay/stopping_policy.hpp"

#include <cmath>

#include "ssadr/errors.hpp"

namespace ssadr::selfplay {

using approx::Matrix;

namespace {

double softplus(double x) {
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

std::vector<std::size_t> layers(std::size_t in,
                                const std::vector<std::size_t>& hidden) {
  std::vector<std::size_t> sizes{in};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(1);
  return sizes;
}

Matrix stack_inputs(std::span<const StopDecision> decisions, std::size_t width) {
  Matrix x(decisions.size(), width);
  for (std::size_t r = 0; r < decisions.size(); ++r) {
    if (decisions[r].input.size() != width)
      throw ArgumentError("stop decision input has wrong width");
    std::copy(decisions[r].input.begin(), decisions[r].input.end(),
              x.row(r).begin());
  }
  return x;
}

}  // namespace

double log_sigmoid(double z) { return -softplus(-z); }
double log_one_minus_sigmoid(double z) { return -softplus(z); }

StoppingPolicy::StoppingPolicy(std::size_t state_dim,
                               StoppingPolicyConfig config, Rng& init_rng)
    : config_(std::move(config)),
      net_(layers(2 * state_dim, config_.hidden), approx::Activation::Sigmoid,
           init_rng),
      opt_(net_.parameter_count(), {.learning_rate = config_.learning_rate}) {
  const double p0 = config_.initial_stop_probability;
  if (!(p0 > 0.0 && p0 < 1.0))
    throw ConfigError("initial stop probability must be in (0, 1)");
  // The output bias is the last parameter.
  net_.parameters().back() = std::log(p0 / (1.0 - p0));
}

std::vector<double> StoppingPolicy::input(std::span<const double> s0,
                                          std::span<const double> st) {
  std::vector<double> x(s0.begin(), s0.end());
  x.insert(x.end(), st.begin(), st.end());
  return x;
}

double StoppingPolicy::stop_probability(std::span<const double> s0,
                                        std::span<const double> st) const {
  return net_.forward(input(s0, st))[0];
}

StopDecision StoppingPolicy::decide(std::span<const double> s0,
                                    std::span<const double> st,
                                    Rng& rng) const {
  StopDecision d;
  d.input = input(s0, st);
  const double logit = net_.forward_preactivation(d.input)[0];
  const double p_stop = std::exp(log_sigmoid(logit));
  d.stop = uniform01(rng) < p_stop;
  d.log_prob = d.stop ? log_sigmoid(logit) : log_one_minus_sigmoid(logit);
  if (!std::isfinite(d.log_prob))
    throw NumericError("stopping policy: non-finite log-probability");
  return d;
}

double StoppingPolicy::surrogate(std::span<const StopDecision> decisions,
                                 double advantage) const {
  if (decisions.empty()) return 0.0;
  approx::Approximator::Tape tape;
  net_.forward_batch(stack_inputs(decisions, net_.input_size()), &tape);
  double total = 0.0;
  for (std::size_t r = 0; r < decisions.size(); ++r) {
    const double z = tape.output_pre(r, 0);
    total += decisions[r].stop ? log_sigmoid(z) : log_one_minus_sigmoid(z);
  }
  return total * advantage;
}

std::vector<double> StoppingPolicy::surrogate_gradient(
    std::span<const StopDecision> decisions, double advantage) const {
  std::vector<double> grad(net_.parameter_count(), 0.0);
  if (decisions.empty() || advantage == 0.0) return grad;
  approx::Approximator::Tape tape;
  const Matrix p = net_.forward_batch(stack_inputs(decisions, net_.input_size()),
                                      &tape);
  // d log sigmoid(z)/dz = 1 - p,  d log(1 - sigmoid(z))/dz = -p.
  Matrix up(decisions.size(), 1);
  for (std::size_t r = 0; r < decisions.size(); ++r)
    up(r, 0) = advantage * (decisions[r].stop ? 1.0 - p(r, 0) : -p(r, 0));
  net_.backward(tape, up, grad, nullptr, approx::Upstream::PreActivation);
  return grad;
}

double StoppingPolicy::update(std::span<const StopDecision> decisions,
                              double alice_reward) {
  for (const auto& d : decisions)
    if (!std::isfinite(d.log_prob))
      throw NumericError("stopping policy update: non-finite log-probability");
  if (!std::isfinite(alice_reward))
    throw NumericError("stopping policy update: non-finite reward");
  const double advantage = alice_reward - baseline_;
  const double loss = -surrogate(decisions, advantage);
  if (!decisions.empty() && advantage != 0.0) {
    auto grad = surrogate_gradient(decisions, advantage);
    for (double& g : grad) g = -g;  // descend the loss
    opt_.step(net_.parameters(), grad);
  }
  baseline_ += config_.baseline_rate * (alice_reward - baseline_);
  return loss;
}

}  // namespace ssadr::selfplay
