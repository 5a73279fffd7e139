#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ssadr/approx/adam.hpp"
#include "ssadr/approx/approximator.hpp"
#include "ssadr/rng.hpp"

namespace ssadr::selfplay {

// One sampled STOP/continue decision and what it was conditioned on.
struct StopDecision {
  std::vector<double> input;  // s_0 followed by s_t
  bool stop = false;
  double log_prob = 0.0;
};

struct StoppingPolicyConfig {
  std::vector<std::size_t> hidden{300, 300};
  double learning_rate = 1e-3;
  double baseline_rate = 0.01;
  // Sets the output bias; the remaining weights use the usual init.
  double initial_stop_probability = 0.05;
};

// Alice's Bernoulli STOP signal, pi(stop | s_0, s_t), trained by REINFORCE
// on her self-play reward with a running-mean baseline.
class StoppingPolicy {
 public:
  StoppingPolicy(std::size_t state_dim, StoppingPolicyConfig config,
                 Rng& init_rng);

  static std::vector<double> input(std::span<const double> s0,
                                   std::span<const double> st);

  double stop_probability(std::span<const double> s0,
                          std::span<const double> st) const;
  StopDecision decide(std::span<const double> s0, std::span<const double> st,
                      Rng& rng) const;

  // sum_t log pi(decision_t) * advantage, evaluated with the current net.
  double surrogate(std::span<const StopDecision> decisions,
                   double advantage) const;
  std::vector<double> surrogate_gradient(
      std::span<const StopDecision> decisions, double advantage) const;

  // Ascends the surrogate with advantage r_a - baseline, then moves the
  // baseline toward r_a. Returns the loss (negated surrogate) before the step.
  double update(std::span<const StopDecision> decisions, double alice_reward);

  double baseline() const { return baseline_; }
  void set_baseline(double b) { baseline_ = b; }
  const approx::Approximator& net() const { return net_; }
  approx::Approximator& net() { return net_; }

 private:
  StoppingPolicyConfig config_;
  approx::Approximator net_;
  approx::Adam opt_;
  double baseline_ = 0.0;
};

// log sigmoid(z) and log(1 - sigmoid(z)), stable for large |z|.
double log_sigmoid(double z);
double log_one_minus_sigmoid(double z);

}  // namespace ssadr::selfplay
