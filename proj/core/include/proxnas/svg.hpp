#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "proxnas/nas.hpp"

namespace proxnas {

// Standalone SVG line chart of the per-operator weight summary: one series
// per operator, x = epoch, y = weight in [0,1], legend with operator names.
// Always writes the sibling CSV next to the chart (same stem, .csv).
void emit_svg(const std::vector<TraceRecord>& trace, const std::vector<std::string>& op_names,
              const std::filesystem::path& svg_path);

}  // namespace proxnas
