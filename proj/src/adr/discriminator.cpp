#include "ssadr/adr/discriminator.hpp"

#include <algorithm>
#include <cmath>

#include "ssadr/errors.hpp"
#include "ssadr/selfplay/stopping_policy.hpp"

namespace ssadr::adr {

using approx::Matrix;
using selfplay::log_one_minus_sigmoid;
using selfplay::log_sigmoid;

std::size_t feature_length(std::size_t state_dim, std::size_t action_dim) {
  return kTrajectorySamples * (state_dim + action_dim);
}

std::vector<double> featurize_trajectory(
    std::span<const ddpg::Transition> transitions, std::size_t state_dim,
    std::size_t action_dim) {
  if (transitions.empty())
    throw ArgumentError("featurize_trajectory: empty trajectory");
  const std::size_t width = state_dim + action_dim;
  std::vector<double> feat(kTrajectorySamples * width, 0.0);
  const std::size_t T = transitions.size();
  const std::size_t used = std::min(T, kTrajectorySamples);
  for (std::size_t i = 0; i < used; ++i) {
    const std::size_t t =
        T <= kTrajectorySamples ? i : i * (T - 1) / (kTrajectorySamples - 1);
    const auto& tr = transitions[t];
    if (tr.state.size() != state_dim || tr.action.size() != action_dim)
      throw ArgumentError("featurize_trajectory: transition dims");
    std::copy(tr.state.begin(), tr.state.end(), feat.begin() + i * width);
    std::copy(tr.action.begin(), tr.action.end(),
              feat.begin() + i * width + state_dim);
  }
  return feat;
}

namespace {

std::vector<std::size_t> layers(std::size_t in,
                                const std::vector<std::size_t>& hidden) {
  std::vector<std::size_t> sizes{in};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(1);
  return sizes;
}

// Rows: reference batch, then randomized batch.
Matrix stack(std::span<const std::vector<double>> ref,
             std::span<const std::vector<double>> rnd, std::size_t width) {
  Matrix x(ref.size() + rnd.size(), width);
  std::size_t r = 0;
  for (auto batch : {ref, rnd})
    for (const auto& f : batch) {
      if (f.size() != width)
        throw ArgumentError("discriminator: feature length mismatch");
      std::copy(f.begin(), f.end(), x.row(r++).begin());
    }
  return x;
}

}  // namespace

Discriminator::Discriminator(std::size_t feature_len, DiscriminatorConfig config,
                             Rng& init_rng)
    : net_(layers(feature_len, config.hidden), approx::Activation::Sigmoid,
           init_rng),
      opt_(net_.parameter_count(), {.learning_rate = config.learning_rate}) {}

double Discriminator::probability(std::span<const double> features) const {
  return std::exp(log_sigmoid(logit(features)));
}

double Discriminator::logit(std::span<const double> features) const {
  if (features.size() != feature_length())
    throw ArgumentError("discriminator: feature length mismatch");
  return net_.forward_preactivation(features)[0];
}

double Discriminator::loss(std::span<const std::vector<double>> ref_feats,
                           std::span<const std::vector<double>> rand_feats) const {
  const std::size_t n = ref_feats.size() + rand_feats.size();
  if (ref_feats.empty() || rand_feats.empty())
    throw ArgumentError("discriminator loss needs both batches");
  approx::Approximator::Tape tape;
  net_.forward_batch(stack(ref_feats, rand_feats, feature_length()), &tape);
  double total = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    const double z = tape.output_pre(r, 0);
    total -= r < ref_feats.size() ? log_one_minus_sigmoid(z) : log_sigmoid(z);
  }
  return total / static_cast<double>(n);
}

std::vector<double> Discriminator::loss_gradient(
    std::span<const std::vector<double>> ref_feats,
    std::span<const std::vector<double>> rand_feats) const {
  const std::size_t n = ref_feats.size() + rand_feats.size();
  if (ref_feats.empty() || rand_feats.empty())
    throw ArgumentError("discriminator loss needs both batches");
  approx::Approximator::Tape tape;
  const Matrix p =
      net_.forward_batch(stack(ref_feats, rand_feats, feature_length()), &tape);
  Matrix up(n, 1);
  for (std::size_t r = 0; r < n; ++r) {
    const double label = r < ref_feats.size() ? 0.0 : 1.0;
    up(r, 0) = (p(r, 0) - label) / static_cast<double>(n);
  }
  std::vector<double> grad(net_.parameter_count(), 0.0);
  net_.backward(tape, up, grad, nullptr, approx::Upstream::PreActivation);
  return grad;
}

double discriminator_reward(const Discriminator& d,
                            std::span<const double> features) {
  return log_sigmoid(d.logit(features));
}

double train_discriminator(Discriminator& d,
                           std::span<const std::vector<double>> ref_feats,
                           std::span<const std::vector<double>> rand_feats) {
  const double before = d.loss(ref_feats, rand_feats);
  const auto grad = d.loss_gradient(ref_feats, rand_feats);
  d.optimizer().step(d.net().parameters(), grad);
  return before;
}

}  // namespace ssadr::adr
