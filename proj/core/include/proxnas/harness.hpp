#pragma once

#include <filesystem>

#include "proxnas/config.hpp"
#include "proxnas/experiment.hpp"

namespace proxnas {

// Runs one experiment into out_dir and leaves a complete, reproducible run
// directory behind: config.txt (effective config echo), dataset.manifest,
// trace.csv, report.txt, checkpoint/ and trace.svg.
ExperimentReport run_config(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

}  // namespace proxnas
