#include "z2meson/run_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "z2meson/errors.hpp"

namespace z2meson {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_plain(const std::string& s, const std::string& context) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw UsageError("cannot parse number '" + context + "'");
  return v;
}

long long parse_integer(const std::string& s, const std::string& key) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw UsageError("'" + key + "' expects an integer, got '" + s + "'");
  return v;
}

bool parse_bool(const std::string& s, const std::string& key) {
  if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
  if (s == "0" || s == "false" || s == "no" || s == "off") return false;
  throw UsageError("'" + key + "' expects a boolean, got '" + s + "'");
}

std::string join_numbers(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    out += format_number(values[i]);
  }
  return out;
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

double parse_number(const std::string& text) {
  const std::string s = trim(text);
  if (s.empty()) throw UsageError("empty number");
  const auto pi_pos = s.find("pi");
  if (pi_pos == std::string::npos) {
    const auto slash = s.find('/');
    if (slash == std::string::npos) return parse_plain(s, s);
    return parse_plain(trim(s.substr(0, slash)), s) / parse_plain(trim(s.substr(slash + 1)), s);
  }
  std::string coeff = trim(s.substr(0, pi_pos));
  if (!coeff.empty() && coeff.back() == '*') coeff = trim(coeff.substr(0, coeff.size() - 1));
  double num = 1.0;
  if (coeff == "-") num = -1.0;
  else if (!coeff.empty()) num = parse_plain(coeff, s);
  const std::string rest = trim(s.substr(pi_pos + 2));
  double den = 1.0;
  if (!rest.empty()) {
    if (rest.front() != '/') throw UsageError("cannot parse number '" + s + "'");
    den = parse_plain(trim(rest.substr(1)), s);
  }
  return num * std::numbers::pi / den;
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (trim(item).empty()) continue;
    out.push_back(parse_number(item));
  }
  return out;
}

AnalysisWindow parse_window(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw UsageError("window must look like start:end, got '" + text + "'");
  AnalysisWindow w;
  w.t_start = parse_number(text.substr(0, colon));
  w.t_end = parse_number(text.substr(colon + 1));
  if (!(w.t_start >= 0.0 && w.t_end > w.t_start)) throw UsageError("window needs 0 <= start < end");
  return w;
}

void apply_setting(RunConfig& c, const std::string& raw_key, const std::string& raw_value) {
  const std::string key = trim(raw_key);
  const std::string value = trim(raw_value);
  if (key == "L") c.L = static_cast<int>(parse_integer(value, key));
  else if (key == "J") c.J = parse_number(value);
  else if (key == "h") c.h = parse_number(value);
  else if (key == "theta") c.theta = parse_number(value);
  else if (key == "t_max" || key == "tmax") c.t_max = parse_number(value);
  else if (key == "dt") c.dt = parse_number(value);
  else if (key == "window") {
    const bool respect = c.window.respect_reflection;
    c.window = parse_window(value);
    c.window.respect_reflection = respect;
  } else if (key == "respect_reflection") c.window.respect_reflection = parse_bool(value, key);
  else if (key == "snapshots") c.snapshot_times = parse_number_list(value);
  else if (key == "write_density") c.write_density = parse_bool(value, key);
  else if (key == "write_heatmap") c.write_heatmap = parse_bool(value, key);
  else if (key == "seed") {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size()) throw UsageError("'seed' expects an unsigned integer");
    c.seed = v;
  } else if (key == "r_max") c.r_max = static_cast<int>(parse_integer(value, key));
  else if (key == "k") c.k = parse_number(value);
  else if (key == "format") {
    if (value == "csv") c.format = OutputFormat::Csv;
    else if (value == "json") c.format = OutputFormat::Json;
    else throw UsageError("format must be csv or json");
  } else if (key == "out_dir") c.out_dir = value;
  else if (key == "jobs") {
    const long long j = parse_integer(value, key);
    if (j < 1) throw UsageError("jobs must be >= 1");
    c.jobs = static_cast<unsigned>(j);
  } else {
    throw UsageError("unknown config key '" + key + "'");
  }
}

void load_config(RunConfig& config, std::istream& in) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError("config line " + std::to_string(lineno) + ": expected key = value");
    apply_setting(config, line.substr(0, eq), line.substr(eq + 1));
  }
}

void load_config_file(RunConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path + "'");
  load_config(config, in);
}

void validate(const RunConfig& c) {
  for (double v : {c.J, c.h, c.theta, c.t_max, c.dt, c.k, c.window.t_start, c.window.t_end}) {
    if (!std::isfinite(v)) throw UsageError("parameters must be finite");
  }
  if (c.L < 4) throw UsageError("L must be at least 4");
  if (c.L % 2 != 0) throw UsageError("the initial meson state needs an even L");
  if (!(c.dt > 0.0)) throw UsageError("dt must be positive");
  if (c.t_max < 0.0) throw UsageError("t_max must be non-negative");
  if (c.theta < 0.0 || c.theta > std::numbers::pi + 1e-12) throw UsageError("theta must lie in [0, pi]");
  if (c.h < 0.0) throw UsageError("h must be non-negative");
  if (!(c.window.t_start >= 0.0 && c.window.t_end > c.window.t_start)) throw UsageError("window needs 0 <= start < end");
  if (c.r_max != 0 && c.r_max < 2) throw UsageError("r_max must be at least 2");
}

std::vector<std::pair<std::string, std::string>> to_pairs(const RunConfig& c) {
  return {
      {"L", std::to_string(c.L)},
      {"J", format_number(c.J)},
      {"h", format_number(c.h)},
      {"theta", format_number(c.theta)},
      {"t_max", format_number(c.t_max)},
      {"dt", format_number(c.dt)},
      {"window", format_number(c.window.t_start) + ":" + format_number(c.window.t_end)},
      {"respect_reflection", c.window.respect_reflection ? "true" : "false"},
      {"snapshots", join_numbers(c.snapshot_times)},
      {"write_density", c.write_density ? "true" : "false"},
      {"write_heatmap", c.write_heatmap ? "true" : "false"},
      {"seed", std::to_string(c.seed)},
      {"r_max", std::to_string(c.r_max)},
      {"k", format_number(c.k)},
      {"format", c.format == OutputFormat::Csv ? "csv" : "json"},
  };
}

std::string to_text(const RunConfig& c) {
  std::string out;
  for (const auto& [k, v] : to_pairs(c)) out += k + " = " + v + "\n";
  return out;
}

}  // namespace z2meson
