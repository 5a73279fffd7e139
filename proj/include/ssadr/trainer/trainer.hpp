#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ssadr/adr/svpg.hpp"
#include "ssadr/ddpg/agent.hpp"
#include "ssadr/trainer/config.hpp"
#include "ssadr/trainer/evaluation.hpp"

namespace ssadr::trainer {

struct SelfPlayRecord {
  long timestep = 0;
  int t_a = 0;
  int t_b = 0;
  double alice_reward = 0.0;
  int particle = -1;  // -1 when no particle set is in use
};

struct SampleRecord {
  long timestep = 0;
  int particle = -1;
  std::vector<double> normalized;
  std::vector<double> physical;
};

struct LossRecord {
  long timestep = 0;
  std::string component;
  double value = 0.0;
};

class MetricsSink {
 public:
  virtual ~MetricsSink() = default;
  virtual void on_eval(const EvalRecord&) {}
  virtual void on_selfplay(const SelfPlayRecord&) {}
  virtual void on_sample(const SampleRecord&) {}
  virtual void on_loss(const LossRecord&) {}
};

class RecordingSink : public MetricsSink {
 public:
  void on_eval(const EvalRecord& r) override { evals.push_back(r); }
  void on_selfplay(const SelfPlayRecord& r) override { selfplay.push_back(r); }
  void on_sample(const SampleRecord& r) override { samples.push_back(r); }
  void on_loss(const LossRecord& r) override { losses.push_back(r); }

  std::vector<EvalRecord> evals;
  std::vector<SelfPlayRecord> selfplay;
  std::vector<SampleRecord> samples;
  std::vector<LossRecord> losses;
};

// Forwards every record to each of the wrapped sinks.
class TeeSink : public MetricsSink {
 public:
  explicit TeeSink(std::vector<MetricsSink*> sinks) : sinks_(std::move(sinks)) {}
  void on_eval(const EvalRecord& r) override;
  void on_selfplay(const SelfPlayRecord& r) override;
  void on_sample(const SampleRecord& r) override;
  void on_loss(const LossRecord& r) override;

 private:
  std::vector<MetricsSink*> sinks_;
};

struct RewardChecks {
  long alice_checked = 0;
  long bob_checked = 0;
  long violations = 0;
};

struct TrainResult {
  ddpg::DdpgAgent agent;
  long bob_steps = 0;
  long alice_steps = 0;
  long reference_rollout_steps = 0;
  long episodes = 0;
  RewardChecks reward_checks;
  std::vector<adr::Particle> particles;
};

// Each regime consumes exactly cfg.total_timesteps Bob steps, evaluating on
// the default and hard environments every cfg.eval_interval of them.
// Non-finite values abort with NumericError after a diagnostic checkpoint is
// written under cfg.output_dir (when set). A reward of the wrong sign throws
// std::logic_error.
TrainResult train_ssadr(const RunConfig& cfg, MetricsSink& sink);
TrainResult train_udr(const RunConfig& cfg, MetricsSink& sink);
TrainResult train_unsup_default(const RunConfig& cfg, MetricsSink& sink);
TrainResult train_adr_disc(const RunConfig& cfg, MetricsSink& sink);

// Dispatches on cfg.algo after cfg.validate().
TrainResult train(const RunConfig& cfg, MetricsSink& sink);

}  // namespace ssadr::trainer
