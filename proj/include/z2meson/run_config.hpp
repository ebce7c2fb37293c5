#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <vector>

#include "z2meson/analysis.hpp"

namespace z2meson {

inline constexpr const char* kVersion = "z2meson 1.0.0";

enum class OutputFormat { Csv, Json };

/// Parameters of one run. Every output file carries the full config.
struct RunConfig {
  int L = 100;
  double J = 1.0;
  double h = 1.1;
  double theta = 0.0;
  double t_max = 60.0;
  double dt = 0.25;
  AnalysisWindow window{};
  std::vector<double> snapshot_times;  ///< occupation grids are written at these Jt
  bool write_density = true;
  bool write_heatmap = true;
  std::uint64_t seed = 7;
  int r_max = 0;  ///< momentum-block truncation; 0 selects default_r_max
  double k = 0.0;
  OutputFormat format = OutputFormat::Csv;
  std::string out_dir = ".";
  unsigned jobs = 1;
};

/// Sets one field from its textual key. Throws UsageError for an unknown key
/// or unparseable value.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

/// Reads a flat "key = value" file; '#' starts a comment.
void load_config(RunConfig& config, std::istream& in);
void load_config_file(RunConfig& config, const std::string& path);

/// Throws UsageError unless the parameters are finite and consistent.
void validate(const RunConfig& config);

/// key = value lines in a fixed order; load_config reads them back.
std::string to_text(const RunConfig& config);
std::vector<std::pair<std::string, std::string>> to_pairs(const RunConfig& config);

/// "a:b" -> window; either side may be a number or "pi"-free decimal.
AnalysisWindow parse_window(const std::string& text);
/// Comma-separated numbers; entries may use "pi", e.g. "pi/8", "3pi/4", "0.5".
std::vector<double> parse_number_list(const std::string& text);
double parse_number(const std::string& text);

/// Shortest round-trip decimal of a double.
std::string format_number(double value);

}  // namespace z2meson
