#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "proxnas/experiment.hpp"

namespace proxnas {

// Scale presets. `desk` shrinks the depth/budget for interactive runs and
// the test suite; `paper-full` is the headline configuration (6000 layers,
// 12,500 samples, 2000 epochs). Explicit config keys override either.
enum class Profile { PaperFull, Desk };
Profile profile_from_name(std::string_view name);
std::string profile_name(Profile profile);

// Parses a flat "key = value" document into a fully resolved config.
// Precedence: base defaults, then kind-dependent defaults, then the profile,
// then explicit keys. Throws ConfigError with a line number for syntax
// errors, the key name for unknown keys, and the violated constraint for
// range errors.
ExperimentConfig parse_config(std::string_view text, Profile profile = Profile::PaperFull);
ExperimentConfig load_config_file(const std::filesystem::path& path,
                                  Profile profile = Profile::PaperFull);

// Canonical echo of the effective config; parse_config(render_config(c))
// reproduces c exactly.
std::string render_config(const ExperimentConfig& cfg);

}  // namespace proxnas
