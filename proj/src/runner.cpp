#include "z2meson/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "z2meson/errors.hpp"
#include "z2meson/special_functions.hpp"
#include "z2meson/spinmap.hpp"
#include "z2meson/theory.hpp"

namespace z2meson {

namespace fs = std::filesystem;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::pair<std::string, std::string>> meta;
};

void write_atomic(const fs::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory '" + path.parent_path().string() + "': " + ec.message());
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("write to '" + tmp.string() + "' failed");
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move output into place at '" + path.string() + "'");
  }
}

std::string comment_header(const RunConfig& config, const std::vector<std::pair<std::string, std::string>>& meta,
                           const char* mark = "# ") {
  std::string out = std::string(mark) + kVersion + "\n";
  for (const auto& [k, v] : to_pairs(config)) out += std::string(mark) + "config " + k + " = " + v + "\n";
  for (const auto& [k, v] : meta) out += std::string(mark) + k + " = " + v + "\n";
  return out;
}

std::string render_csv(const RunConfig& config, const Table& t) {
  std::string out = comment_header(config, t.meta);
  for (std::size_t c = 0; c < t.columns.size(); ++c) out += (c ? "," : "") + t.columns[c];
  out += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ",";
      out += format_number(row[c]);
    }
    out += "\n";
  }
  return out;
}

std::string render_json(const RunConfig& config, const Table& t) {
  nlohmann::ordered_json doc;
  doc["version"] = kVersion;
  nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
  for (const auto& [k, v] : to_pairs(config)) cfg[k] = v;
  doc["config"] = cfg;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  for (const auto& [k, v] : t.meta) meta[k] = v;
  doc["meta"] = meta;
  doc["columns"] = t.columns;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json r = nlohmann::ordered_json::array();
    for (double v : row) {
      if (std::isfinite(v)) r.push_back(v);
      else r.push_back(nullptr);
    }
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  return doc.dump(1) + "\n";
}

std::string write_table(const RunConfig& config, const Table& t) {
  const bool json = config.format == OutputFormat::Json;
  const fs::path path = fs::path(config.out_dir) / (t.name + (json ? ".json" : ".csv"));
  write_atomic(path, json ? render_json(config, t) : render_csv(config, t));
  return path.string();
}

std::string write_heatmap(const RunConfig& config, const ObservableSeries& series) {
  const int L = config.L;
  std::string out = "P2\n" + comment_header(config, {{"rows", "Jt samples"}, {"columns", "sites 1..L"}});
  out += std::to_string(L) + " " + std::to_string(series.size()) + "\n65535\n";
  for (const auto& row : series.density) {
    for (int i = 0; i < L; ++i) {
      const double d = std::clamp(row[i], 0.0, 1.0);
      out += std::to_string(static_cast<int>(std::lround(d * 65535.0)));
      out += i + 1 < L ? ' ' : '\n';
    }
  }
  const fs::path path = fs::path(config.out_dir) / "density.pgm";
  write_atomic(path, out);
  return path.string();
}

std::string bool_text(bool b) { return b ? "true" : "false"; }

// Runs `task(i)` for i in [0, n) on up to `jobs` threads; rethrows the first failure.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& task) {
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n)));
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::string time_tag(double t) { return "Jt" + format_number(t); }

Table summary_table(const MesonRun& run, const std::string& note) {
  const auto& s = run.summary;
  Table t;
  t.name = "summary";
  t.columns = {"r_prime_avg", "omega", "omega_prominence", "omega_detected", "v", "v_intercept", "v_r_squared",
               "v_low_confidence", "window_start", "window_end", "samples", "reflection_time", "front", "energy"};
  t.rows.push_back({s.r_prime_avg, s.omega.omega, s.omega.prominence, s.omega.detected ? 1.0 : 0.0, s.speed.v,
                    s.speed.intercept, s.speed.r_squared, s.speed.low_confidence ? 1.0 : 0.0, s.window_start,
                    s.window_end, static_cast<double>(s.samples), run.series.reflection_time, s.front,
                    run.theta_energy});
  t.meta.emplace_back("energy_units", "J");
  if (!s.omega.detected) t.meta.emplace_back("omega_note", "no oscillation detected");
  if (!note.empty()) t.meta.emplace_back("note", note);
  return t;
}

Table sweep_table(const std::string& name, const std::vector<SweepRow>& rows) {
  Table t;
  t.name = name;
  t.columns = {"h",     "theta", "energy",      "r_prime_avg", "omega",          "omega_detected",
               "v",     "v_r_squared",          "window_end",  "reflection_time"};
  for (const auto& r : rows) {
    t.rows.push_back({r.h, r.theta, r.energy, r.r_prime_avg, r.omega, r.omega_detected ? 1.0 : 0.0, r.v,
                      r.v_r_squared, r.window_end, r.reflection_time});
  }
  return t;
}

}  // namespace

SectorModel build_sector_model(int L, double J, double h) {
  SectorModel m;
  m.basis = std::make_shared<const TwoParticleBasis>(L);
  m.hamiltonian = build_sector_hamiltonian(*m.basis, J, h);
  m.spectrum = sector_spectrum(*m.basis, m.hamiltonian);
  m.J = J;
  m.h = h;
  return m;
}

MesonRun run_meson(const SectorModel& model, const RunConfig& config) {
  if (model.basis->sites() != config.L || model.J != config.J || model.h != config.h) {
    throw std::invalid_argument("run_meson: model does not match the config");
  }
  const WaveState psi0 = initial_theta_state(model.basis, config.theta);
  const std::vector<double> times = time_grid(config.t_max, config.dt);
  EvolutionOptions opts;
  opts.hamiltonian = &model.hamiltonian;
  opts.occupation_times = config.snapshot_times;

  MesonRun run;
  run.theta_energy = model.hamiltonian.expectation(psi0.amplitudes());
  run.series = evolve_spectral(model.spectrum, psi0, times, opts);
  run.summary = summarize(run.series, config.window);
  return run;
}

SweepRow make_row(const RunConfig& config, const MesonRun& run) {
  SweepRow r;
  r.h = config.h;
  r.theta = config.theta;
  r.energy = run.theta_energy;
  r.r_prime_avg = run.summary.r_prime_avg;
  r.omega = run.summary.omega.detected ? run.summary.omega.omega : kNaN;
  r.omega_detected = run.summary.omega.detected;
  r.v = run.summary.speed.v;
  r.v_r_squared = run.summary.speed.r_squared;
  r.window_end = run.summary.window_end;
  r.reflection_time = run.series.reflection_time;
  return r;
}

FieldSweepReport sweep_field(const RunConfig& config, std::span<const double> fields) {
  if (fields.empty()) throw UsageError("sweep-field needs at least one field value");
  FieldSweepReport rep;
  rep.rows.resize(fields.size());
  parallel_for(fields.size(), config.jobs, [&](std::size_t i) {
    RunConfig c = config;
    c.h = fields[i];
    validate(c);
    const SectorModel model = build_sector_model(c.L, c.J, c.h);
    rep.rows[i] = make_row(c, run_meson(model, c));
  });

  return summarize_field_sweep(std::move(rep.rows));
}

FieldSweepReport summarize_field_sweep(std::vector<SweepRow> rows) {
  FieldSweepReport rep;
  rep.rows = std::move(rows);
  if (rep.rows.size() >= 3) {
    std::vector<double> hs, om, inv, excess;
    for (const auto& r : rep.rows) {
      if (r.omega_detected) {
        hs.push_back(r.h);
        om.push_back(r.omega);
      }
      inv.push_back(1.0 / r.h);
      excess.push_back(r.r_prime_avg - 1.0);
    }
    rep.fitted = true;
    if (hs.size() >= 2) rep.omega_vs_h = fit_line(hs, om);
    rep.size_vs_inverse_h = fit_through_origin(inv, excess);

    std::vector<SweepRow> sorted = rep.rows;
    std::sort(sorted.begin(), sorted.end(), [](const SweepRow& a, const SweepRow& b) { return a.h < b.h; });
    rep.size_strictly_decreasing = true;
    for (std::size_t i = 1; i < sorted.size(); ++i)
      if (!(sorted[i].r_prime_avg < sorted[i - 1].r_prime_avg)) rep.size_strictly_decreasing = false;
  }
  return rep;
}

ThetaSweepReport sweep_theta(const RunConfig& config, std::span<const double> thetas) {
  if (thetas.empty()) throw UsageError("sweep-theta needs at least one theta value");
  validate(config);
  return sweep_theta(build_sector_model(config.L, config.J, config.h), config, thetas);
}

ThetaSweepReport sweep_theta(const SectorModel& model, const RunConfig& config, std::span<const double> thetas) {
  if (thetas.empty()) throw UsageError("sweep-theta needs at least one theta value");
  validate(config);
  std::vector<SweepRow> rows(thetas.size());
  parallel_for(thetas.size(), config.jobs, [&](std::size_t i) {
    RunConfig c = config;
    c.theta = thetas[i];
    validate(c);
    rows[i] = make_row(c, run_meson(model, c));
  });
  return summarize_theta_sweep(std::move(rows));
}

ThetaSweepReport summarize_theta_sweep(std::vector<SweepRow> rows) {
  ThetaSweepReport rep;
  rep.rows = std::move(rows);
  std::vector<SweepRow> by_energy = rep.rows;
  std::sort(by_energy.begin(), by_energy.end(), [](const SweepRow& a, const SweepRow& b) { return a.energy < b.energy; });
  rep.size_tracks_energy = true;
  for (std::size_t i = 1; i < by_energy.size(); ++i)
    if (!(by_energy[i].r_prime_avg > by_energy[i - 1].r_prime_avg)) rep.size_tracks_energy = false;

  std::vector<SweepRow> by_size = rep.rows;
  std::sort(by_size.begin(), by_size.end(),
            [](const SweepRow& a, const SweepRow& b) { return a.r_prime_avg < b.r_prime_avg; });
  rep.speed_nonincreasing_in_size = true;
  for (std::size_t i = 1; i < by_size.size(); ++i)
    if (by_size[i].v > by_size[i - 1].v) rep.speed_nonincreasing_in_size = false;

  rep.min_speed_r_squared = 1.0;
  for (const auto& r : rep.rows) rep.min_speed_r_squared = std::min(rep.min_speed_r_squared, r.v_r_squared);
  return rep;
}

std::vector<std::string> cmd_evolve(const RunConfig& config) {
  validate(config);
  const SectorModel model = build_sector_model(config.L, config.J, config.h);
  MesonRun run;
  std::string note;
  const WaveState psi0 = initial_theta_state(model.basis, config.theta);
  try {
    run = run_meson(model, config);
  } catch (const std::invalid_argument& e) {
    // the trajectory is still useful when the window is too short to summarize
    EvolutionOptions opts;
    opts.hamiltonian = &model.hamiltonian;
    opts.occupation_times = config.snapshot_times;
    run.theta_energy = model.hamiltonian.expectation(psi0.amplitudes());
    run.series = evolve_spectral(model.spectrum, psi0, time_grid(config.t_max, config.dt), opts);
    run.summary.r_prime_avg = kNaN;
    run.summary.speed.v = kNaN;
    run.summary.window_start = config.window.t_start;
    run.summary.window_end = config.window.t_end;
    note = std::string("summary unavailable: ") + e.what();
  }
  const auto& s = run.series;
  std::vector<std::string> paths;

  Table ts;
  ts.name = "timeseries";
  ts.columns = {"Jt", "r_avg", "c_s", "energy", "norm_error"};
  for (std::size_t i = 0; i < s.size(); ++i) ts.rows.push_back({s.times[i], s.r_avg[i], s.c_s[i], s.energy[i], s.norm_error[i]});
  ts.meta.emplace_back("energy_units", "J");
  paths.push_back(write_table(config, ts));

  Table diag;
  diag.name = "diagnostics";
  diag.columns = {"Jt", "c_mean", "edge_density", "reflected"};
  for (std::size_t i = 0; i < s.size(); ++i)
    diag.rows.push_back({s.times[i], s.c_mean[i], s.edge[i], s.reflected(i) ? 1.0 : 0.0});
  diag.meta.emplace_back("reflection_time", format_number(s.reflection_time));
  paths.push_back(write_table(config, diag));

  if (config.write_density) {
    Table dens;
    dens.name = "density";
    dens.columns.push_back("Jt");
    for (int i = 1; i <= config.L; ++i) dens.columns.push_back("n" + std::to_string(i));
    for (std::size_t i = 0; i < s.size(); ++i) {
      std::vector<double> row{s.times[i]};
      row.insert(row.end(), s.density[i].begin(), s.density[i].end());
      dens.rows.push_back(std::move(row));
    }
    paths.push_back(write_table(config, dens));
  }
  if (config.write_heatmap) paths.push_back(write_heatmap(config, s));

  for (std::size_t k = 0; k < s.occupation.size(); ++k) {
    const OccupationGrid& grid = s.occupation[k];
    const std::string tag = time_tag(s.occupation_times[k]);
    Table occ;
    occ.name = "occupation_" + tag;
    occ.columns = {"r", "cc", "probability"};
    for (int r = 1; r < config.L; ++r)
      for (int cc = r + 2; cc <= 2 * config.L - r; cc += 2) occ.rows.push_back({double(r), double(cc), grid.at(r, cc)});
    occ.meta.emplace_back("Jt", format_number(s.occupation_times[k]));
    occ.meta.emplace_back("requested_Jt", format_number(config.snapshot_times[k]));
    paths.push_back(write_table(config, occ));

    std::vector<int> sizes;
    for (int r = 1; r < config.L; ++r) sizes.push_back(r);
    Table filt;
    filt.name = "filtering_" + tag;
    filt.columns = {"r", "probability", "mean_displacement"};
    for (const auto& p : size_filtering_profile(grid, sizes)) filt.rows.push_back({double(p.r), p.probability, p.mean_displacement});
    filt.meta.emplace_back("Jt", format_number(s.occupation_times[k]));
    paths.push_back(write_table(config, filt));
  }

  paths.push_back(write_table(config, summary_table(run, note)));
  return paths;
}

std::vector<std::string> cmd_sweep_field(const RunConfig& config, std::span<const double> fields) {
  const FieldSweepReport rep = sweep_field(config, fields);
  Table t = sweep_table("sweep_field", rep.rows);
  if (rep.fitted) {
    t.meta.emplace_back("omega_vs_h_slope", format_number(rep.omega_vs_h.slope));
    t.meta.emplace_back("omega_vs_h_intercept", format_number(rep.omega_vs_h.intercept));
    t.meta.emplace_back("omega_vs_h_r_squared", format_number(rep.omega_vs_h.r_squared));
    t.meta.emplace_back("size_fit", "r_prime_avg - 1 = a / h");
    t.meta.emplace_back("size_fit_a", format_number(rep.size_vs_inverse_h.slope));
    t.meta.emplace_back("size_fit_r_squared", format_number(rep.size_vs_inverse_h.r_squared));
    t.meta.emplace_back("size_fit_r_squared_centered", format_number(rep.size_vs_inverse_h.r_squared_centered));
    t.meta.emplace_back("size_strictly_decreasing", bool_text(rep.size_strictly_decreasing));
  } else {
    t.meta.emplace_back("fits", "none (fewer than three field values)");
  }
  return {write_table(config, t)};
}

std::vector<std::string> cmd_sweep_theta(const RunConfig& config, std::span<const double> thetas) {
  const ThetaSweepReport rep = sweep_theta(config, thetas);
  Table t = sweep_table("sweep_theta", rep.rows);
  t.meta.emplace_back("size_tracks_energy", bool_text(rep.size_tracks_energy));
  t.meta.emplace_back("speed_nonincreasing_in_size", bool_text(rep.speed_nonincreasing_in_size));
  t.meta.emplace_back("min_speed_r_squared", format_number(rep.min_speed_r_squared));
  return {write_table(config, t)};
}

std::vector<std::string> theory_quantities() {
  return {"hopping-element", "peak-length",  "airy-zeros",   "airy-energy",        "quantized-energy",
          "theta-energy",    "ravg-large-h", "bessel-vector", "breathing-amplitude"};
}

std::vector<std::string> cmd_theory(const RunConfig& config, const TheoryRequest& req) {
  using namespace theory;
  if (req.n_max < 1) throw UsageError("n-max must be at least 1");
  Table t;
  t.name = "theory_" + req.quantity;
  const double J = config.J, h = config.h;
  if (req.quantity == "hopping-element") {
    t.columns = {"n", "H_2n", "log_abs_H_2n", "log_abs_H_2n_stirling"};
    for (int n = 1; n <= req.n_max; ++n)
      t.rows.push_back({double(n), hopping_matrix_element(n, h, J), hopping_log_magnitude(n, h, J),
                        hopping_log_magnitude_stirling(n, h, J)});
    const PeakLength p = peak_meson_length(h, J);
    t.meta.emplace_back("argmax_n", std::to_string(p.argmax));
    t.meta.emplace_back("estimate_J_over_he", format_number(p.estimate));
  } else if (req.quantity == "peak-length") {
    t.columns = {"h", "estimate_J_over_he", "argmax_n"};
    const std::vector<double> hs = req.values.empty() ? std::vector<double>{h} : req.values;
    for (double hv : hs) {
      const PeakLength p = peak_meson_length(hv, J);
      t.rows.push_back({hv, p.estimate, double(p.argmax)});
    }
  } else if (req.quantity == "airy-zeros") {
    t.columns = {"n", "z_n"};
    for (int n = 1; n <= req.n_max; ++n) t.rows.push_back({double(n), airy_zero(n)});
  } else if (req.quantity == "airy-energy") {
    t.columns = {"n", "k", "E_from_band_bottom", "E_absolute"};
    const double bottom = -4.0 * J * std::cos(0.5 * config.k);
    for (int n = 1; n <= req.n_max; ++n) {
      const double e = airy_energy(n, config.k, h, J);
      t.rows.push_back({double(n), config.k, e, e + bottom});
    }
  } else if (req.quantity == "quantized-energy") {
    t.columns = {"n", "E"};
    for (int n = 1; n <= req.n_max; ++n) t.rows.push_back({double(n), quantized_energy_large_h(n, h)});
  } else if (req.quantity == "theta-energy") {
    t.columns = {"theta", "E"};
    std::vector<double> thetas = req.values;
    if (thetas.empty())
      for (int i = 0; i <= 8; ++i) thetas.push_back(i * std::numbers::pi / 8);
    for (double th : thetas) t.rows.push_back({th, theta_energy(th, h, J)});
  } else if (req.quantity == "ravg-large-h" || req.quantity == "breathing-amplitude") {
    const bool ravg = req.quantity == "ravg-large-h";
    t.columns = {"Jt", ravg ? "r_avg" : "width"};
    for (double tt : time_grid(config.t_max, config.dt))
      t.rows.push_back({tt, ravg ? ravg_large_h(tt, h, J) : breathing_amplitude(tt, h, J)});
  } else if (req.quantity == "bessel-vector") {
    const int r_max = config.r_max > 0 ? config.r_max : default_r_max(J, h);
    t.columns = {"r", "gamma_r"};
    const auto g = bessel_limit_eigenvector(req.n_max, config.k, h, J, r_max);
    for (int r = 1; r <= r_max; ++r) t.rows.push_back({double(r), g[r - 1]});
    t.meta.emplace_back("n", std::to_string(req.n_max));
  } else {
    std::string known;
    for (const auto& q : theory_quantities()) known += (known.empty() ? "" : ", ") + q;
    throw UsageError("unknown theory quantity '" + req.quantity + "' (known: " + known + ")");
  }
  t.meta.emplace_back("quantity", req.quantity);
  return {write_table(config, t)};
}

std::vector<std::string> cmd_spin_sample(const RunConfig& config, const SampleRequest& req) {
  validate(config);
  if (req.count < 2) throw UsageError("count must be at least 2");
  if (!(req.time >= 0.0)) throw UsageError("sample time must be non-negative");
  if (req.trotter_dt > 0.0 && config.L > kMaxSpinSites) {
    throw CapacityError("Trotter check limited to L <= " + std::to_string(kMaxSpinSites));
  }
  const SectorModel model = build_sector_model(config.L, config.J, config.h);
  const WaveState psi0 = initial_theta_state(model.basis, config.theta);
  const double when[] = {req.time};
  const WaveState psi = evolve_states(model.spectrum, psi0, when).front();
  const Snapshot exact = measure(psi);
  const SnapshotDistribution dist = sector_to_snapshot_distribution(psi);
  const SampleEstimate est = sample_snapshots(dist, req.count, config.seed, config.jobs);

  std::vector<std::string> paths;
  std::string text = comment_header(config, {{"L", std::to_string(config.L)},
                                             {"h_over_J", format_number(config.h / config.J)},
                                             {"theta", format_number(config.theta)},
                                             {"Jt", format_number(req.time)},
                                             {"seed", std::to_string(config.seed)},
                                             {"count", std::to_string(req.count)}});
  text.reserve(text.size() + req.count * static_cast<std::size_t>(config.L));
  for (const auto& s : est.samples) {
    text += snapshot_from_positions(s.i1, s.i2, config.L).encode();
    text += '\n';
  }
  const fs::path snap_path = fs::path(config.out_dir) / "snapshots.txt";
  write_atomic(snap_path, text);
  paths.push_back(snap_path.string());

  Table t;
  t.name = "snapshot_estimates";
  t.columns = {"Jt", "count", "r_avg_exact", "r_avg_hat", "r_std", "r_std_error", "c_s_exact", "c_s_hat", "z_score"};
  t.rows.push_back({req.time, double(req.count), exact.r_avg, est.r_avg_hat, est.r_std, est.r_std_error, exact.c_s,
                    est.c_s_hat, est.r_std_error > 0 ? (est.r_avg_hat - exact.r_avg) / est.r_std_error : 0.0});
  paths.push_back(write_table(config, t));

  if (req.trotter_dt > 0.0) {
    const auto steps = static_cast<std::size_t>(std::llround(req.time / req.trotter_dt));
    const std::size_t every = std::max<std::size_t>(1, steps / 100);
    const TrotterTrajectory traj = trotter_evolve_spin(config.L, config.J, config.h, config.theta, req.trotter_dt, steps, every);
    const auto exact_states = evolve_states(model.spectrum, psi0, traj.times);
    Table tr;
    tr.name = "trotter";
    tr.columns = {"Jt", "fidelity", "infidelity", "norm"};
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
      const double f = traj.states[i].fidelity(spin_state_from_sector(exact_states[i]));
      tr.rows.push_back({traj.times[i], f, 1.0 - f, traj.states[i].norm()});
    }
    tr.meta.emplace_back("dt", format_number(req.trotter_dt));
    tr.meta.emplace_back("max_norm_drift", format_number(traj.max_norm_drift));
    tr.meta.emplace_back("two_domain_walls_throughout", bool_text(traj.stayed_in_sector));
    paths.push_back(write_table(config, tr));
  }
  return paths;
}

std::vector<std::string> cmd_spectrum(const RunConfig& config, bool sector, bool dump_operator) {
  std::vector<std::string> paths;
  const int r_max = config.r_max > 0 ? config.r_max : default_r_max(config.J, config.h);
  const TridiagonalOperator block = build_momentum_block(config.k, config.J, config.h, r_max);
  std::vector<double> diag_off(block.diagonal.size() > 0 ? block.diagonal.size() - 1 : 0, block.off_diagonal);
  const std::vector<double> ev = tridiagonal_eigenvalues(block.diagonal, diag_off);
  const double ck = std::cos(0.5 * config.k);

  Table t;
  t.name = "spectrum_block";
  t.columns = {"n", "eigenvalue", "wannier_stark_2hn", "airy_absolute"};
  for (std::size_t n = 0; n < ev.size(); ++n) {
    double airy = kNaN;
    if (ck > 0.0 && config.h > 0.0 && n < 50) airy = theory::airy_energy(int(n) + 1, config.k, config.h, config.J) - 4.0 * config.J * ck;
    t.rows.push_back({double(n + 1), ev[n], theory::quantized_energy_large_h(int(n) + 1, config.h), airy});
  }
  t.meta.emplace_back("k", format_number(config.k));
  t.meta.emplace_back("r_max", std::to_string(r_max));
  paths.push_back(write_table(config, t));

  if (sector || dump_operator) {
    validate(config);
    const TwoParticleBasis basis(config.L);
    const SparseSymmetricOperator H = build_sector_hamiltonian(basis, config.J, config.h);
    if (sector) {
      const Spectrum sp = sector_spectrum(basis, H);
      Table s;
      s.name = "spectrum_sector";
      s.columns = {"index", "eigenvalue"};
      for (std::size_t i = 0; i < sp.size(); ++i) s.rows.push_back({double(i), sp.eigenvalues[i]});
      s.meta.emplace_back("max_residual", format_number(sp.max_residual));
      paths.push_back(write_table(config, s));
    }
    if (dump_operator) {
      std::ostringstream os;
      os << comment_header(config, {{"layout", "size line, then row col value (1-based, both triangles)"}}, "% ");
      H.write_triplets(os);
      const fs::path p = fs::path(config.out_dir) / "operator.txt";
      write_atomic(p, os.str());
      paths.push_back(p.string());
    }
  }
  return paths;
}

}  // namespace z2meson
