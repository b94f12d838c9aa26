#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "lookahead/harness.hpp"

namespace lookahead {

/// Reads every <id>__seed<n>.csv in dir (sorted by file name). Throws
/// InputError naming the path on the first corrupt file, or when none exist.
std::vector<RegretCurve> read_run_directory(const std::filesystem::path& dir);

/// Standalone SVG: mean cumulative regret per config with a +-1 standard
/// error band, legend entries are config ids.
std::string regret_svg(const std::vector<RegretCurve>& curves);

struct ReportFiles {
  std::filesystem::path summary;
  std::filesystem::path chart;
};

/// Writes summary.csv and regret.svg into dir. Output depends only on the CSVs.
ReportFiles write_report(const std::filesystem::path& dir);

}  // namespace lookahead
