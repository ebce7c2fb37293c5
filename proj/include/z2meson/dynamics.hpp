#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "z2meson/basis.hpp"
#include "z2meson/eigensolver.hpp"
#include "z2meson/hamiltonian.hpp"

namespace z2meson {

using Complex = std::complex<double>;

/// Complex amplitudes g_{c,r} over a two-particle basis.
class WaveState {
 public:
  WaveState(std::shared_ptr<const TwoParticleBasis> basis, std::vector<Complex> amplitudes);

  const TwoParticleBasis& basis() const { return *basis_; }
  const std::shared_ptr<const TwoParticleBasis>& basis_ptr() const { return basis_; }
  std::span<const Complex> amplitudes() const { return amplitudes_; }
  std::size_t size() const { return amplitudes_.size(); }

  double norm() const;
  /// |<this|other>|^2
  double fidelity(const WaveState& other) const;

 private:
  std::shared_ptr<const TwoParticleBasis> basis_;
  std::vector<Complex> amplitudes_;
};

/// cos(theta/2)|r=1, cc=L+1> - sin(theta/2)|r=2, cc=L+2>.
/// Throws std::invalid_argument for odd L or theta outside [0, pi].
WaveState initial_theta_state(std::shared_ptr<const TwoParticleBasis> basis, double theta);

/// Probability on the (r, c) grid, r = 1..L-1, cc = 2..2L.
class OccupationGrid {
 public:
  explicit OccupationGrid(int L);

  int sites() const { return sites_; }
  double at(int r, int cc) const { return cells_[slot(r, cc)]; }
  double& at(int r, int cc) { return cells_[slot(r, cc)]; }

  double total() const;
  /// sum_c P(r, c) for r = 1..L-1 (index r-1).
  std::vector<double> size_distribution() const;
  /// Site densities <n_i> for i = 1..L (index i-1), derived from the grid.
  std::vector<double> site_density() const;

 private:
  std::size_t slot(int r, int cc) const;
  int sites_;
  std::vector<double> cells_;
};

OccupationGrid occupation_grid(const WaveState& psi);

/// Observables of one state.
struct Snapshot {
  double r_avg = 0.0;
  double c_mean = 0.0;
  double c_s = 0.0;
  double norm = 0.0;
  std::vector<double> density;  ///< <n_i>, i = 1..L
};

/// r-distribution, center-of-mass moments and densities, evaluated directly
/// from the (i1, i2) amplitudes.
Snapshot measure(const WaveState& psi);

/// Sum of the density over the `width` outermost sites at each end.
double edge_density(std::span<const double> density, int width);

struct EvolutionOptions {
  /// Operator used for the energy column; if null the energy is reported as NaN.
  const SparseSymmetricOperator* hamiltonian = nullptr;
  /// Keep the full (r, c) grid at these times (matched to the nearest grid time).
  std::vector<double> occupation_times;
  int edge_width = 5;
  double edge_threshold = 1e-3;
};

struct ObservableSeries {
  std::vector<double> times;
  std::vector<double> r_avg;
  std::vector<double> c_mean;
  std::vector<double> c_s;
  std::vector<double> energy;
  std::vector<double> norm_error;
  std::vector<double> edge;
  std::vector<std::vector<double>> density;  ///< [time][site]
  /// Occupation grids at EvolutionOptions::occupation_times.
  std::vector<double> occupation_times;
  std::vector<OccupationGrid> occupation;
  /// First time at which the edge density exceeded the threshold; +inf if never.
  double reflection_time = 0.0;

  std::size_t size() const { return times.size(); }
  bool reflected(std::size_t i) const { return times[i] >= reflection_time; }
};

/// psi(t) = V exp(-i Lambda t) V^T psi(0) for each requested time.
/// Throws std::invalid_argument on dimension mismatch or a non-ascending
/// or negative time grid.
std::vector<WaveState> evolve_states(const Spectrum& spectrum, const WaveState& psi0, std::span<const double> times);

ObservableSeries evolve_spectral(const Spectrum& spectrum, const WaveState& psi0, std::span<const double> times,
                                 const EvolutionOptions& options = {});

/// Uniform grid 0, dt, ..., t_max (t_max included when it lies on the grid).
std::vector<double> time_grid(double t_max, double dt);

/// Diagonalizes the open-chain sector Hamiltonian, using the chain mirror
/// symmetry to split the problem into two half-size blocks.
Spectrum sector_spectrum(const TwoParticleBasis& basis, const SparseSymmetricOperator& hamiltonian,
                         const EigenOptions& options = {});

}  // namespace z2meson
