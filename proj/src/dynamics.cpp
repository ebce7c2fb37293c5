#include "z2meson/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace z2meson {

WaveState::WaveState(std::shared_ptr<const TwoParticleBasis> basis, std::vector<Complex> amplitudes)
    : basis_(std::move(basis)), amplitudes_(std::move(amplitudes)) {
  if (!basis_) throw std::invalid_argument("WaveState: null basis");
  if (amplitudes_.size() != basis_->size()) throw std::invalid_argument("WaveState: amplitude count mismatch");
}

double WaveState::norm() const {
  double s = 0.0;
  for (const auto& a : amplitudes_) s += std::norm(a);
  return std::sqrt(s);
}

double WaveState::fidelity(const WaveState& other) const {
  if (other.size() != size()) throw std::invalid_argument("WaveState::fidelity: size mismatch");
  Complex overlap = 0.0;
  for (std::size_t i = 0; i < size(); ++i) overlap += std::conj(amplitudes_[i]) * other.amplitudes_[i];
  return std::norm(overlap);
}

WaveState initial_theta_state(std::shared_ptr<const TwoParticleBasis> basis, double theta) {
  if (!basis) throw std::invalid_argument("initial_theta_state: null basis");
  const int L = basis->sites();
  if (L % 2 != 0 || L < 4) {
    throw std::invalid_argument("initial_theta_state: need an even chain with L >= 4, got L=" + std::to_string(L));
  }
  if (!(theta >= 0.0 && theta <= std::numbers::pi + 1e-12)) {
    throw std::invalid_argument("initial_theta_state: theta must lie in [0, pi]");
  }
  std::vector<Complex> amps(basis->size(), 0.0);
  amps[*basis->index_of_relative(1, L + 1)] = std::cos(0.5 * theta);
  amps[*basis->index_of_relative(2, L + 2)] = -std::sin(0.5 * theta);
  return WaveState(std::move(basis), std::move(amps));
}

OccupationGrid::OccupationGrid(int L) : sites_(L), cells_(static_cast<std::size_t>(L - 1) * (2 * L - 1), 0.0) {
  if (L < 2) throw std::invalid_argument("OccupationGrid: need L >= 2");
}

std::size_t OccupationGrid::slot(int r, int cc) const {
  if (r < 1 || r > sites_ - 1 || cc < 2 || cc > 2 * sites_) {
    throw std::out_of_range("OccupationGrid: (r, cc) outside the chain");
  }
  return static_cast<std::size_t>(r - 1) * (2 * sites_ - 1) + static_cast<std::size_t>(cc - 2);
}

double OccupationGrid::total() const {
  double s = 0.0;
  for (double p : cells_) s += p;
  return s;
}

std::vector<double> OccupationGrid::size_distribution() const {
  std::vector<double> out(static_cast<std::size_t>(sites_ - 1), 0.0);
  for (int r = 1; r < sites_; ++r)
    for (int cc = 2; cc <= 2 * sites_; ++cc) out[r - 1] += at(r, cc);
  return out;
}

std::vector<double> OccupationGrid::site_density() const {
  std::vector<double> out(static_cast<std::size_t>(sites_), 0.0);
  for (int r = 1; r < sites_; ++r) {
    for (int cc = r + 2; cc <= 2 * sites_ - r; cc += 2) {
      const double p = at(r, cc);
      out[(cc + r) / 2 - 1] += p;
      out[(cc - r) / 2 - 1] += p;
    }
  }
  return out;
}

OccupationGrid occupation_grid(const WaveState& psi) {
  OccupationGrid grid(psi.basis().sites());
  const auto states = psi.basis().states();
  const auto amps = psi.amplitudes();
  for (std::size_t i = 0; i < states.size(); ++i) grid.at(states[i].r(), states[i].cc()) += std::norm(amps[i]);
  return grid;
}

Snapshot measure(const WaveState& psi) {
  Snapshot out;
  const auto states = psi.basis().states();
  const auto amps = psi.amplitudes();
  out.density.assign(static_cast<std::size_t>(psi.basis().sites()), 0.0);
  double c2 = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const double p = std::norm(amps[i]);
    const double c = states[i].c();
    out.norm += p;
    out.r_avg += p * states[i].r();
    out.c_mean += p * c;
    c2 += p * c * c;
    out.density[states[i].i1 - 1] += p;
    out.density[states[i].i2 - 1] += p;
  }
  out.c_s = std::sqrt(std::max(0.0, c2 - out.c_mean * out.c_mean));
  out.norm = std::sqrt(out.norm);
  return out;
}

double edge_density(std::span<const double> density, int width) {
  const std::size_t n = density.size();
  const std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(std::max(width, 0)), n);
  double s = 0.0;
  for (std::size_t i = 0; i < w; ++i) s += density[i];
  for (std::size_t i = n - w; i < n; ++i) {
    if (i >= w) s += density[i];
  }
  return s;
}

namespace {

void check_times(std::span<const double> times) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0) || (i > 0 && times[i] < times[i - 1])) {
      throw std::invalid_argument("evolution: times must be nonnegative and ascending");
    }
  }
}

// Reconstructs psi(t) in batches of times so the accumulators stay in cache;
// calls `sink(index, amplitudes)` in time order.
void propagate(const Spectrum& spectrum, const WaveState& psi0, std::span<const double> times,
               const std::function<void(std::size_t, std::vector<Complex>&&)>& sink) {
  const std::size_t n = psi0.size();
  if (spectrum.modes.cols() != n || spectrum.size() != n) {
    throw std::invalid_argument("evolution: spectrum dimension " + std::to_string(spectrum.modes.cols()) +
                                " does not match state dimension " + std::to_string(n));
  }
  check_times(times);

  const auto amps0 = psi0.amplitudes();
  std::vector<Complex> weight(n);
  std::vector<std::size_t> active;
  for (std::size_t j = 0; j < n; ++j) {
    const double* v = spectrum.mode(j).data();
    double re = 0.0, im = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      re += v[s] * amps0[s].real();
      im += v[s] * amps0[s].imag();
    }
    weight[j] = {re, im};
    if (re != 0.0 || im != 0.0) active.push_back(j);
  }

  constexpr std::size_t batch = 8;
  std::vector<double> re(batch * n), im(batch * n);
  for (std::size_t t0 = 0; t0 < times.size(); t0 += batch) {
    const std::size_t nt = std::min(batch, times.size() - t0);
    std::fill(re.begin(), re.begin() + nt * n, 0.0);
    std::fill(im.begin(), im.begin() + nt * n, 0.0);
    for (std::size_t j : active) {
      const double* __restrict v = spectrum.mode(j).data();
      for (std::size_t t = 0; t < nt; ++t) {
        const Complex c = weight[j] * std::polar(1.0, -spectrum.eigenvalues[j] * times[t0 + t]);
        const double cr = c.real(), ci = c.imag();
        double* __restrict pr = re.data() + t * n;
        double* __restrict pi = im.data() + t * n;
        for (std::size_t s = 0; s < n; ++s) {
          pr[s] += cr * v[s];
          pi[s] += ci * v[s];
        }
      }
    }
    for (std::size_t t = 0; t < nt; ++t) {
      std::vector<Complex> out(n);
      for (std::size_t s = 0; s < n; ++s) out[s] = {re[t * n + s], im[t * n + s]};
      sink(t0 + t, std::move(out));
    }
  }
}

}  // namespace

std::vector<WaveState> evolve_states(const Spectrum& spectrum, const WaveState& psi0, std::span<const double> times) {
  std::vector<WaveState> out;
  out.reserve(times.size());
  propagate(spectrum, psi0, times,
            [&](std::size_t, std::vector<Complex>&& amps) { out.emplace_back(psi0.basis_ptr(), std::move(amps)); });
  return out;
}

ObservableSeries evolve_spectral(const Spectrum& spectrum, const WaveState& psi0, std::span<const double> times,
                                 const EvolutionOptions& options) {
  ObservableSeries series;
  const std::size_t nt = times.size();
  series.times.assign(times.begin(), times.end());
  series.r_avg.resize(nt);
  series.c_mean.resize(nt);
  series.c_s.resize(nt);
  series.energy.resize(nt);
  series.norm_error.resize(nt);
  series.edge.resize(nt);
  series.density.resize(nt);
  series.reflection_time = std::numeric_limits<double>::infinity();

  // Nearest grid index for every requested occupation snapshot.
  std::vector<std::size_t> grid_slots;
  for (double t : options.occupation_times) {
    if (nt == 0) break;
    std::size_t idx = 0;
    for (std::size_t i = 1; i < nt; ++i) {
      if (std::abs(times[i] - t) < std::abs(times[idx] - t)) idx = i;
    }
    grid_slots.push_back(idx);
    series.occupation_times.push_back(times[idx]);
    series.occupation.emplace_back(psi0.basis().sites());
  }

  propagate(spectrum, psi0, times, [&](std::size_t i, std::vector<Complex>&& amps) {
    WaveState psi(psi0.basis_ptr(), std::move(amps));
    Snapshot snap = measure(psi);
    series.r_avg[i] = snap.r_avg;
    series.c_mean[i] = snap.c_mean;
    series.c_s[i] = snap.c_s;
    series.norm_error[i] = std::abs(snap.norm - 1.0);
    series.energy[i] = options.hamiltonian ? options.hamiltonian->expectation(psi.amplitudes())
                                           : std::numeric_limits<double>::quiet_NaN();
    series.edge[i] = edge_density(snap.density, options.edge_width);
    series.density[i] = std::move(snap.density);
    if (series.edge[i] > options.edge_threshold && !std::isfinite(series.reflection_time)) {
      series.reflection_time = times[i];
    }
    for (std::size_t g = 0; g < grid_slots.size(); ++g) {
      if (grid_slots[g] == i) series.occupation[g] = occupation_grid(psi);
    }
  });
  return series;
}

std::vector<double> time_grid(double t_max, double dt) {
  if (!(dt > 0.0) || !(t_max >= 0.0)) throw std::invalid_argument("time_grid: need dt > 0 and t_max >= 0");
  const auto steps = static_cast<std::size_t>(std::floor(t_max / dt + 1e-9));
  std::vector<double> out(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) out[i] = static_cast<double>(i) * dt;
  return out;
}

Spectrum sector_spectrum(const TwoParticleBasis& basis, const SparseSymmetricOperator& hamiltonian,
                         const EigenOptions& options) {
  std::vector<std::size_t> mirror(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) mirror[i] = basis.mirror_index(i);
  return eig_symmetric_reflected(hamiltonian, mirror, options);
}

}  // namespace z2meson
