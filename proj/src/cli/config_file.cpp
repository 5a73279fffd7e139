#include "ssadr/cli/config_file.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "ssadr/errors.hpp"

namespace ssadr::cli {

using trainer::RunConfig;

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

template <typename T>
T parse_number(std::string_view s) {
  T v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw ConfigError("invalid number '" + std::string(s) + "'");
  return v;
}

bool parse_bool(std::string_view s) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw ConfigError("invalid boolean '" + std::string(s) +
                    "' (valid: true, false)");
}

std::vector<std::size_t> parse_sizes(std::string_view s) {
  std::vector<std::size_t> out;
  while (!s.empty()) {
    const auto comma = s.find(',');
    const auto item = trim(s.substr(0, comma));
    const auto v = parse_number<std::size_t>(item);
    if (v == 0) throw ConfigError("layer width must be positive");
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    s = s.substr(comma + 1);
  }
  if (out.empty()) throw ConfigError("expected a comma-separated width list");
  return out;
}

std::string fmt_sizes(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i)
    s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

struct Field {
  std::string_view section;
  std::string_view key;
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <typename T>
Field number(std::string_view sec, std::string_view key, T RunConfig::*m) {
  return {sec, key,
          [m](RunConfig& c, std::string_view v) { c.*m = parse_number<T>(v); },
          [m](const RunConfig& c) {
            if constexpr (std::is_floating_point_v<T>)
              return fmt(c.*m);
            else
              return std::to_string(c.*m);
          }};
}

// Member of a nested config struct.
template <typename S, typename T>
Field nested(std::string_view sec, std::string_view key, S RunConfig::*outer,
             T S::*inner) {
  return {sec, key,
          [=](RunConfig& c, std::string_view v) {
            (c.*outer).*inner = parse_number<T>(v);
          },
          [=](const RunConfig& c) {
            if constexpr (std::is_floating_point_v<T>)
              return fmt((c.*outer).*inner);
            else
              return std::to_string((c.*outer).*inner);
          }};
}

template <typename S>
Field widths(std::string_view sec, std::string_view key, S RunConfig::*outer,
             std::vector<std::size_t> S::*inner) {
  return {sec, key,
          [=](RunConfig& c, std::string_view v) {
            (c.*outer).*inner = parse_sizes(v);
          },
          [=](const RunConfig& c) { return fmt_sizes((c.*outer).*inner); }};
}

const std::vector<Field>& fields() {
  using adr::DiscriminatorConfig;
  using adr::SvpgConfig;
  using ddpg::DdpgConfig;
  using selfplay::StoppingPolicyConfig;
  static const std::vector<Field> table = {
      {"run", "algo",
       [](RunConfig& c, std::string_view v) { c.algo = trainer::parse_algo(v); },
       [](const RunConfig& c) { return std::string(to_string(c.algo)); }},
      {"run", "env",
       [](RunConfig& c, std::string_view v) { c.env = envs::parse_env_kind(v); },
       [](const RunConfig& c) { return std::string(envs::to_string(c.env)); }},
      {"run", "range",
       [](RunConfig& c, std::string_view v) {
         c.range = envs::parse_range_mode(v);
       },
       [](const RunConfig& c) { return std::string(envs::to_string(c.range)); }},
      number("run", "seed", &RunConfig::seed),
      number("run", "total_timesteps", &RunConfig::total_timesteps),
      number("run", "eval_interval", &RunConfig::eval_interval),
      number("run", "eval_episodes", &RunConfig::eval_episodes),
      number("run", "max_episode_steps", &RunConfig::max_episode_steps),
      number("run", "warmup_steps", &RunConfig::warmup_steps),
      number("run", "loss_interval", &RunConfig::loss_interval),
      number("run", "replay_capacity", &RunConfig::replay_capacity),
      {"run", "udr_uniform_goals",
       [](RunConfig& c, std::string_view v) {
         c.udr_uniform_goals = parse_bool(v);
       },
       [](const RunConfig& c) {
         return std::string(c.udr_uniform_goals ? "true" : "false");
       }},
      {"run", "unsup_bob_reward",
       [](RunConfig& c, std::string_view v) {
         if (v == "environment")
           c.unsup_bob_reward = selfplay::BobReward::Environment;
         else if (v == "selfplay")
           c.unsup_bob_reward = selfplay::BobReward::SelfPlay;
         else
           throw ConfigError("unknown bob reward '" + std::string(v) +
                             "' (valid: environment, selfplay)");
       },
       [](const RunConfig& c) {
         return std::string(c.unsup_bob_reward ==
                                    selfplay::BobReward::Environment
                                ? "environment"
                                : "selfplay");
       }},
      widths("ddpg", "actor_hidden", &RunConfig::ddpg, &DdpgConfig::actor_hidden),
      widths("ddpg", "critic_hidden", &RunConfig::ddpg,
             &DdpgConfig::critic_hidden),
      nested("ddpg", "actor_lr", &RunConfig::ddpg, &DdpgConfig::actor_lr),
      nested("ddpg", "critic_lr", &RunConfig::ddpg, &DdpgConfig::critic_lr),
      nested("ddpg", "gamma", &RunConfig::ddpg, &DdpgConfig::gamma),
      nested("ddpg", "tau", &RunConfig::ddpg, &DdpgConfig::tau),
      nested("ddpg", "exploration_sigma", &RunConfig::ddpg,
             &DdpgConfig::exploration_sigma),
      nested("ddpg", "batch_size", &RunConfig::ddpg, &DdpgConfig::batch_size),
      number("selfplay", "upsilon", &RunConfig::upsilon),
      number("selfplay", "alice_sigma", &RunConfig::alice_sigma),
      number("selfplay", "goal_rollouts", &RunConfig::goal_rollouts),
      {"selfplay", "alice_transitions_to_replay",
       [](RunConfig& c, std::string_view v) {
         c.alice_transitions_to_replay = parse_bool(v);
       },
       [](const RunConfig& c) {
         return std::string(c.alice_transitions_to_replay ? "true" : "false");
       }},
      widths("selfplay", "stopping_hidden", &RunConfig::stopping,
             &StoppingPolicyConfig::hidden),
      nested("selfplay", "stopping_lr", &RunConfig::stopping,
             &StoppingPolicyConfig::learning_rate),
      nested("selfplay", "baseline_rate", &RunConfig::stopping,
             &StoppingPolicyConfig::baseline_rate),
      nested("selfplay", "initial_stop_probability", &RunConfig::stopping,
             &StoppingPolicyConfig::initial_stop_probability),
      nested("svpg", "n_particles", &RunConfig::svpg, &SvpgConfig::n_particles),
      nested("svpg", "learning_rate", &RunConfig::svpg,
             &SvpgConfig::learning_rate),
      nested("svpg", "temperature", &RunConfig::svpg, &SvpgConfig::temperature),
      {"svpg", "bandwidth",
       [](RunConfig& c, std::string_view v) {
         if (v == "median")
           c.svpg.bandwidth_mode = adr::BandwidthMode::Median;
         else if (v == "fixed")
           c.svpg.bandwidth_mode = adr::BandwidthMode::Fixed;
         else
           throw ConfigError("unknown bandwidth mode '" + std::string(v) +
                             "' (valid: median, fixed)");
       },
       [](const RunConfig& c) {
         return std::string(c.svpg.bandwidth_mode == adr::BandwidthMode::Median
                                ? "median"
                                : "fixed");
       }},
      nested("svpg", "fixed_bandwidth", &RunConfig::svpg,
             &SvpgConfig::fixed_bandwidth),
      nested("svpg", "proposal_sigma", &RunConfig::svpg,
             &SvpgConfig::proposal_sigma),
      nested("svpg", "episodes_per_particle", &RunConfig::svpg,
             &SvpgConfig::episodes_per_particle),
      widths("discriminator", "hidden", &RunConfig::discriminator,
             &DiscriminatorConfig::hidden),
      nested("discriminator", "learning_rate", &RunConfig::discriminator,
             &DiscriminatorConfig::learning_rate),
  };
  return table;
}

const Field& find_field(std::string_view section, std::string_view key) {
  for (const auto& f : fields())
    if (f.section == section && f.key == key) return f;
  throw ConfigError("unknown key '" + std::string(section) + "." +
                    std::string(key) + "'");
}

}  // namespace

void apply_config_text(RunConfig& cfg, std::string_view text,
                       const std::string& source) {
  std::string section;
  int line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    try {
      std::string_view line = raw;
      if (const auto hash = line.find('#'); hash != std::string_view::npos)
        line = line.substr(0, hash);
      line = trim(line);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']') throw ConfigError("unterminated section header");
        section = std::string(trim(line.substr(1, line.size() - 2)));
        bool known = false;
        for (const auto& f : fields()) known = known || f.section == section;
        if (!known) throw ConfigError("unknown section [" + section + "]");
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string_view::npos)
        throw ConfigError("expected 'key = value'");
      if (section.empty()) throw ConfigError("key outside any section");
      const auto key = trim(line.substr(0, eq));
      const auto value = trim(line.substr(eq + 1));
      if (value.empty()) throw ConfigError("empty value for '" +
                                           std::string(key) + "'");
      find_field(section, key).set(cfg, value);
    } catch (const ConfigError& e) {
      throw ConfigError(source + ":" + std::to_string(line_no) + ": " +
                        e.what());
    }
  }
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  apply_config_text(cfg, ss.str(), path);
}

void apply_override(RunConfig& cfg, std::string_view assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string_view::npos || dot == std::string_view::npos || dot > eq)
    throw ConfigError("override '" + std::string(assignment) +
                      "': expected section.key=value");
  try {
    find_field(trim(assignment.substr(0, dot)),
               trim(assignment.substr(dot + 1, eq - dot - 1)))
        .set(cfg, trim(assignment.substr(eq + 1)));
  } catch (const ConfigError& e) {
    throw ConfigError("override '" + std::string(assignment) + "': " +
                      e.what());
  }
}

std::string render_config(const RunConfig& cfg) {
  std::string out;
  std::string_view section;
  for (const auto& f : fields()) {
    if (f.section != section) {
      section = f.section;
      out += (out.empty() ? "[" : "\n[") + std::string(section) + "]\n";
    }
    out += std::string(f.key) + " = " + f.get(cfg) + "\n";
  }
  return out;
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& f : fields())
    keys.push_back(std::string(f.section) + "." + std::string(f.key));
  return keys;
}

}  // namespace ssadr::cli
