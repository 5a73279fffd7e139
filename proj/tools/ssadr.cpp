#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "ssadr/cli/commands.hpp"

using namespace ssadr::cli;

int main(int argc, char** argv) {
  CLI::App app{"Self-supervised active domain randomization laboratory"};
  app.require_subcommand(1);

  TrainOptions train;
  std::string config, algo, env, range;
  long timesteps = 0;
  auto* t = app.add_subcommand("train", "run one training regime");
  t->add_option("--config", config, "config file");
  t->add_option("--seed", train.seed, "run seed")->required();
  t->add_option("--algo", algo, "ssadr | udr | unsup_default | adr_disc");
  t->add_option("--env", env, "pusher | reacher");
  t->add_option("--range", range, "calibrated | uncalibrated");
  t->add_option("--timesteps", timesteps, "total Bob timesteps");
  t->add_option("--set", train.overrides, "section.key=value override");
  t->add_option("--name", train.run_name, "run directory name");

  EvalOptions eval;
  std::string env_eval;
  auto* e = app.add_subcommand("eval", "evaluate a checkpoint or a fixed policy");
  e->add_option("--checkpoint", eval.checkpoint, "checkpoint directory");
  e->add_option("--policy", eval.policy, "zero | oracle");
  e->add_option("--env", env_eval, "pusher | reacher");
  e->add_option("--params", eval.params, "default | hard | explicit");
  e->add_option("--xi", eval.xi, "normalized parameters for --params explicit")
      ->delimiter(',');
  e->add_option("--range", eval.range, "calibrated | uncalibrated");
  e->add_option("--episodes", eval.episodes, "episodes (default 25)");
  e->add_option("--seed", eval.seed, "seed of the goal set");
  e->add_option("--append", eval.append_to, "metrics file to append to");

  SampleHistOptions hist;
  auto* h = app.add_subcommand("sample-hist", "histogram of sampled parameters");
  h->add_option("metrics", hist.metrics, "metrics.jsonl")->required();
  h->add_option("--bins", hist.bins, "number of bins");
  h->add_option("--window", hist.window, "trailing fraction of training");
  h->add_option("--dim", hist.dim, "parameter dimension");
  h->add_option("-o,--output", hist.csv_out, "CSV path (stdout if omitted)");
  h->add_option("--svg", hist.svg_out, "SVG path");

  PlotOptions plot;
  auto* p = app.add_subcommand("plot", "learning curves across runs");
  p->add_option("metrics", plot.metrics, "metrics.jsonl files")->required();
  p->add_option("-o,--output", plot.csv_out, "CSV path (stdout if omitted)");
  p->add_option("--svg", plot.svg_out, "SVG path");

  SweepOptions sweep;
  auto* s = app.add_subcommand("sweep", "train every (algo, seed) pair");
  s->add_option("--algos", sweep.algos, "algorithms")->delimiter(',')->required();
  s->add_option("--seeds", sweep.seeds, "seeds")->delimiter(',')->required();
  s->add_option("--jobs", sweep.jobs, "concurrent runs");
  s->add_option("train_args", sweep.train_args, "arguments after -- go to train");
  s->prefix_command(false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (*t) {
    if (!config.empty()) train.config_path = config;
    if (!algo.empty()) train.overrides.insert(train.overrides.begin(), "run.algo=" + algo);
    if (!env.empty()) train.overrides.insert(train.overrides.begin(), "run.env=" + env);
    if (!range.empty()) train.overrides.insert(train.overrides.begin(), "run.range=" + range);
    if (timesteps > 0)
      train.overrides.insert(train.overrides.begin(),
                             "run.total_timesteps=" + std::to_string(timesteps));
    if (const char* root = std::getenv("CF_OUT")) train.out_root = root;
    return cmd_train(train, std::cout, std::cerr);
  }
  if (*e) {
    if (!env_eval.empty()) eval.env = env_eval;
    return cmd_eval(eval, std::cout, std::cerr);
  }
  if (*h) return cmd_sample_hist(hist, std::cout, std::cerr);
  if (*p) return cmd_plot(plot, std::cout, std::cerr);
  if (*s) {
    sweep.executable = std::filesystem::canonical("/proc/self/exe").string();
    return cmd_sweep(sweep, std::cout, std::cerr);
  }
  return kExitUsage;
}
