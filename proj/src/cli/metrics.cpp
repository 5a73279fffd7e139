#include "ssadr/cli/metrics.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "json.hpp"
#include "ssadr/errors.hpp"

namespace ssadr::cli {

using nlohmann::json;

MetricsError::MetricsError(const std::string& path, int line,
                           const std::string& what)
    : std::runtime_error(path + ":" + std::to_string(line) + ": " + what),
      line_(line) {}

MetricsHeader make_header(const trainer::RunConfig& cfg) {
  const auto space = envs::RandomizationSpace::for_env(cfg.env, cfg.range);
  MetricsHeader h;
  h.schema = kMetricsSchema;
  h.algo = cfg.algo;
  h.env = cfg.env;
  h.range = cfg.range;
  h.seed = cfg.seed;
  h.total_timesteps = cfg.total_timesteps;
  h.eval_interval = cfg.eval_interval;
  h.lower = space.lower();
  h.upper = space.upper();
  h.reference = space.reference();
  return h;
}

RunSummary make_summary(const trainer::TrainResult& r) {
  return {r.bob_steps,
          r.alice_steps,
          r.reference_rollout_steps,
          r.episodes,
          r.reward_checks.alice_checked,
          r.reward_checks.bob_checked,
          r.reward_checks.violations};
}

namespace {

json eval_json(const trainer::EvalRecord& r) {
  return {{"kind", "eval"},
          {"timestep", r.timestep},
          {"eval_env", std::string(to_string(r.eval_env))},
          {"mean_final_distance", r.mean_final_distance},
          {"distances", r.distances},
          {"seed", r.seed},
          {"algo", std::string(to_string(r.algo))}};
}

}  // namespace

std::string eval_line(const trainer::EvalRecord& r) {
  return eval_json(r).dump();
}

JsonlSink::JsonlSink(std::ostream& out, const MetricsHeader& h) : out_(out) {
  out_ << json{{"kind", "header"},
               {"schema", h.schema},
               {"algo", std::string(to_string(h.algo))},
               {"env", std::string(envs::to_string(h.env))},
               {"range", std::string(envs::to_string(h.range))},
               {"seed", h.seed},
               {"total_timesteps", h.total_timesteps},
               {"eval_interval", h.eval_interval},
               {"space",
                {{"lower", h.lower},
                 {"upper", h.upper},
                 {"reference", h.reference}}}}
              .dump()
       << '\n';
}

void JsonlSink::on_eval(const trainer::EvalRecord& r) {
  out_ << eval_json(r).dump() << '\n';
}

void JsonlSink::on_selfplay(const trainer::SelfPlayRecord& r) {
  out_ << json{{"kind", "selfplay"},
               {"timestep", r.timestep},
               {"t_a", r.t_a},
               {"t_b", r.t_b},
               {"r_a", r.alice_reward},
               {"particle", r.particle}}
              .dump()
       << '\n';
}

void JsonlSink::on_sample(const trainer::SampleRecord& r) {
  out_ << json{{"kind", "sample"},
               {"timestep", r.timestep},
               {"particle", r.particle},
               {"xi", r.normalized},
               {"physical", r.physical}}
              .dump()
       << '\n';
}

void JsonlSink::on_loss(const trainer::LossRecord& r) {
  out_ << json{{"kind", "loss"},
               {"timestep", r.timestep},
               {"component", r.component},
               {"value", r.value}}
              .dump()
       << '\n';
}

void JsonlSink::write_summary(const RunSummary& s) {
  out_ << json{{"kind", "summary"},
               {"bob_steps", s.bob_steps},
               {"alice_steps", s.alice_steps},
               {"reference_rollout_steps", s.reference_rollout_steps},
               {"episodes", s.episodes},
               {"alice_reward_checks", s.alice_reward_checks},
               {"bob_reward_checks", s.bob_reward_checks},
               {"reward_violations", s.reward_violations}}
              .dump()
       << '\n';
  out_.flush();
}

MetricsFile read_metrics(std::istream& in, const std::string& path) {
  MetricsFile m;
  std::string line;
  int n = 0;
  long last_t = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) throw MetricsError(path, n, "empty line");
    try {
      const json j = json::parse(line);
      const std::string kind = j.at("kind").get<std::string>();
      if (!have_header) {
        if (kind != "header") throw MetricsError(path, n, "missing header");
        auto& h = m.header;
        h.schema = j.at("schema").get<std::string>();
        if (h.schema != kMetricsSchema)
          throw MetricsError(path, n, "unsupported schema '" + h.schema + "'");
        h.algo = trainer::parse_algo(j.at("algo").get<std::string>());
        h.env = envs::parse_env_kind(j.at("env").get<std::string>());
        h.range = envs::parse_range_mode(j.at("range").get<std::string>());
        h.seed = j.at("seed").get<std::uint64_t>();
        h.total_timesteps = j.at("total_timesteps").get<long>();
        h.eval_interval = j.at("eval_interval").get<long>();
        h.lower = j.at("space").at("lower").get<std::vector<double>>();
        h.upper = j.at("space").at("upper").get<std::vector<double>>();
        h.reference = j.at("space").at("reference").get<std::vector<double>>();
        have_header = true;
        continue;
      }
      if (kind == "summary") {
        auto& s = m.summary;
        s.bob_steps = j.at("bob_steps").get<long>();
        s.alice_steps = j.at("alice_steps").get<long>();
        s.reference_rollout_steps = j.at("reference_rollout_steps").get<long>();
        s.episodes = j.at("episodes").get<long>();
        s.alice_reward_checks = j.at("alice_reward_checks").get<long>();
        s.bob_reward_checks = j.at("bob_reward_checks").get<long>();
        s.reward_violations = j.at("reward_violations").get<long>();
        m.has_summary = true;
        continue;
      }
      const long t = j.at("timestep").get<long>();
      if (t < last_t)
        throw MetricsError(path, n, "timestep decreases");
      last_t = t;
      if (kind == "eval") {
        trainer::EvalRecord r;
        r.timestep = t;
        r.eval_env = trainer::parse_eval_env(j.at("eval_env").get<std::string>());
        r.mean_final_distance = j.at("mean_final_distance").get<double>();
        r.distances = j.at("distances").get<std::vector<double>>();
        r.seed = j.at("seed").get<std::uint64_t>();
        r.algo = trainer::parse_algo(j.at("algo").get<std::string>());
        m.evals.push_back(std::move(r));
      } else if (kind == "selfplay") {
        m.selfplay.push_back({t, j.at("t_a").get<int>(), j.at("t_b").get<int>(),
                              j.at("r_a").get<double>(),
                              j.at("particle").get<int>()});
      } else if (kind == "sample") {
        m.samples.push_back({t, j.at("particle").get<int>(),
                             j.at("xi").get<std::vector<double>>(),
                             j.at("physical").get<std::vector<double>>()});
      } else if (kind == "loss") {
        m.losses.push_back({t, j.at("component").get<std::string>(),
                            j.at("value").get<double>()});
      } else {
        throw MetricsError(path, n, "unknown record kind '" + kind + "'");
      }
    } catch (const MetricsError&) {
      throw;
    } catch (const std::exception& e) {
      throw MetricsError(path, n, e.what());
    }
  }
  if (!have_header) throw MetricsError(path, n + 1, "missing header");
  return m;
}

MetricsFile read_metrics_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MetricsError(path, 0, "cannot open metrics file");
  return read_metrics(in, path);
}

}  // namespace ssadr::cli
