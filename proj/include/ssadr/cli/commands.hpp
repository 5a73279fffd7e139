#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ssadr/cli/metrics.hpp"

namespace ssadr::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumeric = 3;

struct TrainOptions {
  std::optional<std::string> config_path;
  // "section.key=value", applied after the config file.
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  // Output root; the run directory is <root>/<run_name>.
  std::string out_root = "runs";
  std::string run_name;  // default: <algo>_<env>_s<seed>
};

// Writes config.resolved, metrics.jsonl and checkpoints/final under the run
// directory.
int cmd_train(const TrainOptions& opts, std::ostream& out, std::ostream& err);

struct EvalOptions {
  std::string checkpoint;
  std::string policy;  // zero | oracle, used instead of a checkpoint
  std::optional<std::string> env;
  std::string params = "default";  // default | hard | explicit
  std::vector<double> xi;          // normalized, for params = explicit
  std::string range = "calibrated";
  int episodes = 25;
  std::uint64_t seed = 0;
  std::string append_to;  // metrics file receiving the EvalRecord
};

int cmd_eval(const EvalOptions& opts, std::ostream& out, std::ostream& err);

struct HistogramBin {
  double low = 0.0;
  double high = 0.0;
  long count = 0;
  double fraction = 0.0;
};

// Equal-width bins over [low, high]; values outside are clamped into the end
// bins.
std::vector<HistogramBin> histogram(const std::vector<double>& values,
                                    double low, double high, int bins);

// Physical values of dimension `dim` sampled in the trailing `window`
// fraction of the run.
std::vector<double> windowed_samples(const MetricsFile& m, double window,
                                     std::size_t dim);

struct SampleHistOptions {
  std::string metrics;
  int bins = 20;
  double window = 0.25;
  std::size_t dim = 0;
  std::string csv_out;  // stdout when empty
  std::string svg_out;
};

int cmd_sample_hist(const SampleHistOptions& opts, std::ostream& out,
                    std::ostream& err);

struct CurvePoint {
  std::string algo;
  std::string eval_env;
  long timestep = 0;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  int runs = 0;
};

// Mean and min/max envelope across runs of each (algo, eval env, timestep).
// Throws ConfigError when the runs mix environment kinds.
std::vector<CurvePoint> learning_curves(const std::vector<MetricsFile>& runs);

struct PlotOptions {
  std::vector<std::string> metrics;
  std::string csv_out;
  std::string svg_out;
};

int cmd_plot(const PlotOptions& opts, std::ostream& out, std::ostream& err);

struct SweepOptions {
  std::string executable;
  std::vector<std::string> algos;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> train_args;  // forwarded to every child
  int jobs = 1;
};

// Runs one child `train` process per (algo, seed); returns the worst exit
// status.
int cmd_sweep(const SweepOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace ssadr::cli
