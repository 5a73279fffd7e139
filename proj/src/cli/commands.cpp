#include "ssadr/cli/commands.hpp"

#include <spawn.h>
#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "ssadr/cli/config_file.hpp"
#include "ssadr/errors.hpp"
#include "ssadr/trainer/checkpoint.hpp"
#include "svg.hpp"

extern char** environ;

namespace ssadr::cli {

namespace fs = std::filesystem;

namespace {

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  f << text;
  if (!f) throw ConfigError("cannot write " + p.string());
}

}  // namespace

int cmd_train(const TrainOptions& opts, std::ostream& out, std::ostream& err) {
  trainer::RunConfig cfg;
  fs::path dir;
  try {
    if (opts.config_path) apply_config_file(cfg, *opts.config_path);
    for (const auto& o : opts.overrides) apply_override(cfg, o);
    if (!opts.seed) throw ConfigError("--seed is required for train");
    cfg.seed = *opts.seed;
    cfg.validate();
    const std::string name =
        opts.run_name.empty()
            ? std::string(to_string(cfg.algo)) + "_" +
                  std::string(envs::to_string(cfg.env)) + "_s" +
                  std::to_string(cfg.seed)
            : opts.run_name;
    dir = fs::path(opts.out_root) / name;
    fs::create_directories(dir);
    cfg.output_dir = dir.string();
    write_text(dir / "config.resolved", render_config(cfg));
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  std::ofstream metrics(dir / "metrics.jsonl", std::ios::binary);
  JsonlSink sink(metrics, make_header(cfg));
  try {
    auto result = trainer::train(cfg, sink);
    sink.write_summary(make_summary(result));
    trainer::Checkpoint c;
    c.env = cfg.env;
    c.algo = cfg.algo;
    c.timestep = result.bob_steps;
    c.actor = result.agent.actor();
    trainer::save_checkpoint((dir / "checkpoints" / "final").string(), c);
    out << "run " << dir.string() << ": " << result.bob_steps << " bob steps, "
        << result.alice_steps << " alice steps, " << result.episodes
        << " episodes\n";
    return kExitOk;
  } catch (const NumericError& e) {
    metrics.flush();
    err << "numeric failure: " << e.what() << " (diagnostic checkpoint in "
        << (dir / "checkpoints" / "diagnostic").string() << ")\n";
    return kExitNumeric;
  } catch (const std::logic_error& e) {
    err << "invariant violated: " << e.what() << '\n';
    return kExitNumeric;
  }
}

int cmd_eval(const EvalOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    if (opts.episodes < 1) throw ConfigError("--episodes must be at least 1");
    std::optional<envs::EnvKind> env;
    if (opts.env) env = envs::parse_env_kind(*opts.env);
    trainer::Policy policy;
    if (!opts.checkpoint.empty()) {
      if (!opts.policy.empty())
        throw ConfigError("give either --checkpoint or --policy, not both");
      const auto ck = trainer::load_checkpoint(opts.checkpoint);
      if (env && *env != ck.env)
        throw ConfigError("checkpoint was trained on " +
                          std::string(envs::to_string(ck.env)) +
                          ", not " + *opts.env);
      env = ck.env;
      policy = trainer::checkpoint_policy(ck);
    } else {
      if (!env) throw ConfigError("--env is required with --policy");
      if (opts.policy == "zero")
        policy = trainer::zero_policy(*env);
      else if (opts.policy == "oracle")
        policy = trainer::scripted_policy();
      else
        throw ConfigError("need --checkpoint or --policy (zero, oracle)");
    }

    const auto range = envs::parse_range_mode(opts.range);
    const int steps = envs::kDefaultMaxSteps;
    trainer::EvalEnv which;
    std::optional<envs::EnvInstance> proto;
    if (opts.params == "default") {
      which = trainer::EvalEnv::Default;
      proto = trainer::default_eval_env(*env, range, steps);
    } else if (opts.params == "hard") {
      which = trainer::EvalEnv::Hard;
      proto = trainer::hard_eval_env(*env, steps);
    } else if (opts.params == "explicit") {
      which = trainer::EvalEnv::Explicit;
      const auto space = envs::RandomizationSpace::for_env(*env, range);
      if (opts.xi.size() != space.n_dims())
        throw ConfigError("expected " + std::to_string(space.n_dims()) +
                          " xi values, got " + std::to_string(opts.xi.size()));
      for (double v : opts.xi)
        if (!(v >= 0.0 && v <= 1.0))
          throw ConfigError("xi values must lie in [0, 1]");
      proto = envs::make_env(space, envs::EnvParams(opts.xi), *env, steps);
    } else {
      throw ConfigError("unknown params mode '" + opts.params +
                        "' (valid: default, hard, explicit)");
    }

    auto rec = trainer::evaluate(policy, *proto, opts.episodes,
                                 trainer::eval_seed_for(opts.seed));
    rec.eval_env = which;
    rec.seed = opts.seed;
    double var = 0.0;
    for (double d : rec.distances)
      var += (d - rec.mean_final_distance) * (d - rec.mean_final_distance);
    const double sd = std::sqrt(var / rec.distances.size());
    out << "mean_final_distance " << rec.mean_final_distance << " +- " << sd
        << " over " << opts.episodes << " episodes ("
        << trainer::to_string(which) << ")\n";
    if (!opts.append_to.empty()) {
      const auto m = read_metrics_file(opts.append_to);
      rec.algo = m.header.algo;
      if (m.header.env != *env)
        throw ConfigError("metrics file is for a different env kind");
      rec.timestep = m.header.total_timesteps;
      std::ofstream f(opts.append_to, std::ios::app | std::ios::binary);
      f << eval_line(rec) << '\n';
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const MetricsError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

std::vector<HistogramBin> histogram(const std::vector<double>& values,
                                    double low, double high, int bins) {
  if (bins < 1) throw ArgumentError("histogram needs at least one bin");
  if (!(high > low)) throw ArgumentError("histogram range is empty");
  std::vector<HistogramBin> h(bins);
  const double width = (high - low) / bins;
  for (int b = 0; b < bins; ++b) {
    h[b].low = low + b * width;
    h[b].high = b + 1 == bins ? high : low + (b + 1) * width;
  }
  for (double v : values) {
    const int b = std::clamp(static_cast<int>(std::floor((v - low) / width)), 0,
                             bins - 1);
    ++h[b].count;
  }
  for (auto& bin : h)
    bin.fraction = values.empty() ? 0.0
                                  : static_cast<double>(bin.count) /
                                        static_cast<double>(values.size());
  return h;
}

std::vector<double> windowed_samples(const MetricsFile& m, double window,
                                     std::size_t dim) {
  if (!(window > 0.0 && window <= 1.0))
    throw ConfigError("window must be in (0, 1]");
  if (dim >= m.header.lower.size())
    throw ConfigError("dimension " + std::to_string(dim) + " out of range");
  const double start = (1.0 - window) * static_cast<double>(m.header.total_timesteps);
  std::vector<double> v;
  for (const auto& s : m.samples)
    if (static_cast<double>(s.timestep) >= start) v.push_back(s.physical.at(dim));
  return v;
}

int cmd_sample_hist(const SampleHistOptions& opts, std::ostream& out,
                    std::ostream& err) {
  try {
    const auto m = read_metrics_file(opts.metrics);
    if (m.samples.empty()) throw ConfigError("no sample records in " + opts.metrics);
    const auto values = windowed_samples(m, opts.window, opts.dim);
    if (values.empty()) throw ConfigError("no sample records inside the window");
    const auto h = histogram(values, m.header.lower[opts.dim],
                             m.header.upper[opts.dim], opts.bins);
    std::ostringstream csv;
    csv.precision(17);
    csv << "bin_low,bin_high,count,fraction\n";
    for (const auto& b : h)
      csv << b.low << ',' << b.high << ',' << b.count << ',' << b.fraction
          << '\n';
    if (opts.csv_out.empty())
      out << csv.str();
    else
      write_text(opts.csv_out, csv.str());
    if (!opts.svg_out.empty()) {
      std::vector<svg::Bar> bars;
      for (const auto& b : h) bars.push_back({b.low, b.high, b.fraction});
      write_text(opts.svg_out,
                 svg::bar_chart(bars,
                                std::string(to_string(m.header.algo)) +
                                    " sampled parameters",
                                "parameter " + std::to_string(opts.dim)));
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const MetricsError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << '\n';
  }
  return kExitUsage;
}

std::vector<CurvePoint> learning_curves(const std::vector<MetricsFile>& runs) {
  if (runs.empty()) throw ConfigError("no metrics files");
  for (const auto& r : runs)
    if (r.header.env != runs.front().header.env)
      throw ConfigError("metrics mix env kinds " +
                        std::string(envs::to_string(runs.front().header.env)) +
                        " and " + std::string(envs::to_string(r.header.env)));
  std::map<std::tuple<std::string, std::string, long>, std::vector<double>> by;
  for (const auto& r : runs)
    for (const auto& e : r.evals)
      by[{std::string(to_string(r.header.algo)),
          std::string(to_string(e.eval_env)), e.timestep}]
          .push_back(e.mean_final_distance);
  std::vector<CurvePoint> pts;
  for (const auto& [key, v] : by) {
    CurvePoint p;
    std::tie(p.algo, p.eval_env, p.timestep) = key;
    double sum = 0.0;
    for (double x : v) sum += x;
    p.mean = sum / static_cast<double>(v.size());
    p.min = *std::min_element(v.begin(), v.end());
    p.max = *std::max_element(v.begin(), v.end());
    p.runs = static_cast<int>(v.size());
    pts.push_back(std::move(p));
  }
  return pts;
}

int cmd_plot(const PlotOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    std::vector<MetricsFile> runs;
    for (const auto& p : opts.metrics) runs.push_back(read_metrics_file(p));
    const auto pts = learning_curves(runs);
    std::ostringstream csv;
    csv.precision(17);
    csv << "algo,eval_env,timestep,mean,min,max,runs\n";
    for (const auto& p : pts)
      csv << p.algo << ',' << p.eval_env << ',' << p.timestep << ',' << p.mean
          << ',' << p.min << ',' << p.max << ',' << p.runs << '\n';
    if (opts.csv_out.empty())
      out << csv.str();
    else
      write_text(opts.csv_out, csv.str());
    if (!opts.svg_out.empty()) {
      std::vector<svg::Series> series;
      for (const auto& p : pts) {
        const std::string label = p.algo + " / " + p.eval_env;
        if (series.empty() || series.back().label != label)
          series.push_back({label, {}, {}, {}, {}});
        auto& s = series.back();
        s.x.push_back(static_cast<double>(p.timestep));
        s.mean.push_back(p.mean);
        s.min.push_back(p.min);
        s.max.push_back(p.max);
      }
      write_text(opts.svg_out,
                 svg::line_chart(series, "final distance to goal",
                                 "mean final distance"));
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const MetricsError& e) {
    err << "error: " << e.what() << '\n';
  }
  return kExitUsage;
}

namespace {

struct Child {
  pid_t pid;
  std::string label;
};

int wait_child(const Child& c, std::ostream& out) {
  int status = 0;
  if (waitpid(c.pid, &status, 0) < 0) return 1;
  const int code = WIFEXITED(status) ? WEXITSTATUS(status) : 128;
  out << c.label << " exit " << code << '\n';
  return code;
}

}  // namespace

int cmd_sweep(const SweepOptions& opts, std::ostream& out, std::ostream& err) {
  if (opts.algos.empty() || opts.seeds.empty()) {
    err << "error: sweep needs at least one algo and one seed\n";
    return kExitUsage;
  }
  for (const auto& a : opts.algos) {
    try {
      trainer::parse_algo(a);
    } catch (const ConfigError& e) {
      err << "error: " << e.what() << '\n';
      return kExitUsage;
    }
  }
  const int jobs = std::max(1, opts.jobs);
  std::vector<Child> running;
  int worst = 0;
  auto reap_one = [&] {
    worst = std::max(worst, wait_child(running.front(), out));
    running.erase(running.begin());
  };
  for (const auto& algo : opts.algos)
    for (const auto seed : opts.seeds) {
      std::vector<std::string> args{opts.executable, "train", "--algo", algo,
                                    "--seed", std::to_string(seed)};
      args.insert(args.end(), opts.train_args.begin(), opts.train_args.end());
      std::vector<char*> argv;
      for (auto& a : args) argv.push_back(a.data());
      argv.push_back(nullptr);
      if (static_cast<int>(running.size()) >= jobs) reap_one();
      pid_t pid = 0;
      if (posix_spawn(&pid, opts.executable.c_str(), nullptr, nullptr,
                      argv.data(), environ) != 0) {
        err << "error: cannot start " << opts.executable << '\n';
        worst = std::max(worst, 1);
        continue;
      }
      running.push_back({pid, algo + " seed " + std::to_string(seed)});
    }
  while (!running.empty()) reap_one();
  return worst;
}

}  // namespace ssadr::cli
