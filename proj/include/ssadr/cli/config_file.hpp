#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ssadr/trainer/config.hpp"

namespace ssadr::cli {

// Flat key-value document with one section per module:
//
//   [run]
//   algo = ssadr
//   seed = 3
//   [ddpg]
//   actor_hidden = 400,300
//
// '#' starts a comment. Unknown sections or keys and malformed values raise
// ConfigError prefixed with "<source>:<line>:".
void apply_config_text(trainer::RunConfig& cfg, std::string_view text,
                       const std::string& source);
void apply_config_file(trainer::RunConfig& cfg, const std::string& path);

// "section.key=value"
void apply_override(trainer::RunConfig& cfg, std::string_view assignment);

// Every key with its value, in the same format; parsing it back reproduces
// `cfg` exactly.
std::string render_config(const trainer::RunConfig& cfg);

// All recognised "section.key" names.
std::vector<std::string> config_keys();

}  // namespace ssadr::cli
