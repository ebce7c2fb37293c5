#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "z2meson/analysis.hpp"
#include "z2meson/dynamics.hpp"
#include "z2meson/eigensolver.hpp"
#include "z2meson/hamiltonian.hpp"
#include "z2meson/run_config.hpp"

namespace z2meson {

/// Basis, Hamiltonian and spectrum of one (L, J, h) point.
struct SectorModel {
  std::shared_ptr<const TwoParticleBasis> basis;
  SparseSymmetricOperator hamiltonian;
  Spectrum spectrum;
  double J = 1.0;
  double h = 0.0;
};

SectorModel build_sector_model(int L, double J, double h);

struct MesonRun {
  ObservableSeries series;
  MesonSummary summary;
  double theta_energy = 0.0;  ///< <psi_theta|H|psi_theta> from the sector operator
};

/// Evolves the theta state of `config` on the grid 0..t_max and summarizes it
/// over config.window. The model must match config.L, J and h.
MesonRun run_meson(const SectorModel& model, const RunConfig& config);

struct SweepRow {
  double h = 0.0;
  double theta = 0.0;
  double energy = 0.0;
  double r_prime_avg = 0.0;
  double omega = 0.0;
  bool omega_detected = false;
  double v = 0.0;
  double v_r_squared = 0.0;
  double window_end = 0.0;
  double reflection_time = 0.0;
};

SweepRow make_row(const RunConfig& config, const MesonRun& run);

struct FieldSweepReport {
  std::vector<SweepRow> rows;
  bool fitted = false;  ///< fits need at least three field values
  LinearFit omega_vs_h;
  OriginFit size_vs_inverse_h;  ///< r'_avg - 1 = a / h
  bool size_strictly_decreasing = false;
};

/// One sector model per field value, run concurrently over config.jobs workers.
FieldSweepReport sweep_field(const RunConfig& config, std::span<const double> fields);
/// Fits and monotonicity flags for rows computed elsewhere.
FieldSweepReport summarize_field_sweep(std::vector<SweepRow> rows);

struct ThetaSweepReport {
  std::vector<SweepRow> rows;
  /// r'_avg ordered the same way as E(theta) across the rows.
  bool size_tracks_energy = false;
  /// v nonincreasing when the rows are ordered by increasing r'_avg.
  bool speed_nonincreasing_in_size = false;
  double min_speed_r_squared = 0.0;
};

/// A single spectrum at config.h shared by every theta.
ThetaSweepReport sweep_theta(const RunConfig& config, std::span<const double> thetas);
ThetaSweepReport sweep_theta(const SectorModel& model, const RunConfig& config, std::span<const double> thetas);
ThetaSweepReport summarize_theta_sweep(std::vector<SweepRow> rows);

struct SampleRequest {
  std::size_t count = 100000;
  double time = 30.0;
  double trotter_dt = 0.0;  ///< > 0 also runs the spin-model Trotter check
};

struct TheoryRequest {
  std::string quantity;
  int n_max = 12;
  std::vector<double> values;  ///< theta or h list, depending on the quantity
};

/// File-writing subcommands. Each returns the paths it wrote.
std::vector<std::string> cmd_evolve(const RunConfig& config);
std::vector<std::string> cmd_sweep_field(const RunConfig& config, std::span<const double> fields);
std::vector<std::string> cmd_sweep_theta(const RunConfig& config, std::span<const double> thetas);
/// Throws UsageError for an unknown quantity.
std::vector<std::string> cmd_theory(const RunConfig& config, const TheoryRequest& request);
std::vector<std::string> cmd_spin_sample(const RunConfig& config, const SampleRequest& request);
std::vector<std::string> cmd_spectrum(const RunConfig& config, bool sector, bool dump_operator);

std::vector<std::string> theory_quantities();

}  // namespace z2meson
