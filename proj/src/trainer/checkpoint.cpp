#include "ssadr/trainer/checkpoint.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ssadr/envs/env.hpp"
#include "ssadr/errors.hpp"

namespace ssadr::trainer {

namespace fs = std::filesystem;

void save_checkpoint(const std::string& dir, const Checkpoint& c) {
  fs::create_directories(dir);
  if (c.policy == PolicyKind::Network && !c.actor)
    throw ArgumentError("network checkpoint without an actor");
  std::ofstream m(fs::path(dir) / "manifest");
  m << "ssadr-checkpoint 1\n"
    << "env " << envs::to_string(c.env) << '\n'
    << "algo " << to_string(c.algo) << '\n'
    << "policy " << (c.policy == PolicyKind::Network ? "network" : "oracle")
    << '\n'
    << "status " << (c.diagnostic ? "diagnostic" : "final") << '\n'
    << "timestep " << c.timestep << '\n'
    << "end\n";
  if (!m) throw ConfigError("cannot write checkpoint manifest in " + dir);
  if (c.actor) approx::save_file((fs::path(dir) / "actor").string(), *c.actor);
}

namespace {

std::string expect_field(std::istream& in, const std::string& key,
                         const std::string& where) {
  std::string line;
  if (!std::getline(in, line))
    throw ConfigError(where + ": missing '" + key + "'");
  std::istringstream ls(line);
  std::string k, v;
  ls >> k >> v;
  if (k != key || v.empty())
    throw ConfigError(where + ": expected '" + key + " <value>', got '" +
                      line + "'");
  return v;
}

}  // namespace

Checkpoint load_checkpoint(const std::string& dir) {
  const std::string where = (fs::path(dir) / "manifest").string();
  std::ifstream in(where);
  if (!in) throw ConfigError("cannot open checkpoint manifest " + where);
  std::string line;
  if (!std::getline(in, line) || line != "ssadr-checkpoint 1")
    throw ConfigError(where + ": not a checkpoint manifest");
  Checkpoint c;
  c.env = envs::parse_env_kind(expect_field(in, "env", where));
  c.algo = parse_algo(expect_field(in, "algo", where));
  const std::string policy = expect_field(in, "policy", where);
  if (policy == "network")
    c.policy = PolicyKind::Network;
  else if (policy == "oracle")
    c.policy = PolicyKind::Oracle;
  else
    throw ConfigError(where + ": unknown policy kind '" + policy + "'");
  const std::string status = expect_field(in, "status", where);
  if (status != "final" && status != "diagnostic")
    throw ConfigError(where + ": unknown status '" + status + "'");
  c.diagnostic = status == "diagnostic";
  try {
    c.timestep = std::stol(expect_field(in, "timestep", where));
  } catch (const std::logic_error&) {
    throw ConfigError(where + ": bad timestep");
  }
  if (!std::getline(in, line) || line != "end")
    throw ConfigError(where + ": missing end marker");

  if (c.policy == PolicyKind::Network) {
    c.actor = approx::load_file((fs::path(dir) / "actor").string());
    const std::size_t in_dim = envs::EnvInstance::state_dim(c.env) + 2;
    const std::size_t out_dim = envs::EnvInstance::action_dim(c.env);
    if (c.actor->input_size() != in_dim || c.actor->output_size() != out_dim)
      throw ConfigError(dir + ": actor shape does not match env " +
                        std::string(envs::to_string(c.env)));
  }
  return c;
}

Policy checkpoint_policy(const Checkpoint& c) {
  if (c.policy == PolicyKind::Oracle) return scripted_policy();
  return actor_policy(*c.actor);
}

}  // namespace ssadr::trainer
