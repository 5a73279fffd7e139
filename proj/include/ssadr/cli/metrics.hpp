#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "ssadr/trainer/trainer.hpp"

namespace ssadr::cli {

inline constexpr const char* kMetricsSchema = "ssadr-metrics/1";

// Raised for unreadable metrics; `line` is 1-based.
class MetricsError : public std::runtime_error {
 public:
  MetricsError(const std::string& path, int line, const std::string& what);
  int line() const { return line_; }

 private:
  int line_;
};

struct MetricsHeader {
  std::string schema;
  trainer::Algo algo = trainer::Algo::SsAdr;
  envs::EnvKind env = envs::EnvKind::Pusher;
  envs::RangeMode range = envs::RangeMode::Calibrated;
  std::uint64_t seed = 0;
  long total_timesteps = 0;
  long eval_interval = 0;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<double> reference;
};

struct RunSummary {
  long bob_steps = 0;
  long alice_steps = 0;
  long reference_rollout_steps = 0;
  long episodes = 0;
  long alice_reward_checks = 0;
  long bob_reward_checks = 0;
  long reward_violations = 0;
};

MetricsHeader make_header(const trainer::RunConfig& cfg);
RunSummary make_summary(const trainer::TrainResult& r);

// One JSON object per line: a header, then eval / selfplay / sample / loss
// records in non-decreasing timestep order and a closing summary. `ssadr eval`
// may append further eval records after the summary.
class JsonlSink : public trainer::MetricsSink {
 public:
  JsonlSink(std::ostream& out, const MetricsHeader& header);

  void on_eval(const trainer::EvalRecord& r) override;
  void on_selfplay(const trainer::SelfPlayRecord& r) override;
  void on_sample(const trainer::SampleRecord& r) override;
  void on_loss(const trainer::LossRecord& r) override;
  void write_summary(const RunSummary& s);

 private:
  std::ostream& out_;
};

// A single eval line, as written by JsonlSink.
std::string eval_line(const trainer::EvalRecord& r);

struct MetricsFile {
  MetricsHeader header;
  std::vector<trainer::EvalRecord> evals;
  std::vector<trainer::SelfPlayRecord> selfplay;
  std::vector<trainer::SampleRecord> samples;
  std::vector<trainer::LossRecord> losses;
  bool has_summary = false;
  RunSummary summary;
};

// Throws MetricsError naming the first bad line.
MetricsFile read_metrics(std::istream& in, const std::string& path);
MetricsFile read_metrics_file(const std::string& path);

}  // namespace ssadr::cli
