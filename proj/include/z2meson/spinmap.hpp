#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "z2meson/dynamics.hpp"

namespace z2meson {

/// A full measurement of the L-1 link spins in the two-particle sector.
struct SpinSnapshot {
  int i1 = 0;
  int i2 = 0;
  std::vector<std::int8_t> spins;

  int r() const { return i1 - i2; }
  /// One character per link, 'u' for +1 and 'd' for -1.
  std::string encode() const;
};

SpinSnapshot snapshot_from_positions(int i1, int i2, int L);

/// True when the spins form exactly one contiguous +1 block against the -1
/// vacuum, i.e. two domain walls.
bool is_two_wall_pattern(std::span<const std::int8_t> spins);

/// Born-rule probabilities of the snapshots, in basis order.
struct SnapshotDistribution {
  int sites = 0;
  std::vector<PairState> configurations;
  std::vector<double> probabilities;

  double total() const;
  /// P(r) for r = 1..L-1 (index r-1).
  std::vector<double> size_marginal() const;
  double mean_size() const;
};

SnapshotDistribution sector_to_snapshot_distribution(const WaveState& psi);

/// Stateless counter-based generator: the k-th draw of stream `seed` is
/// splitmix64(splitmix64(seed) + k * 0x9E3779B97F4A7C15), which makes every
/// draw addressable and identical on every platform.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed);
  std::uint64_t bits(std::uint64_t counter) const;
  /// Uniform in [0, 1) from the top 53 bits.
  double uniform(std::uint64_t counter) const;

  static std::uint64_t splitmix64(std::uint64_t x);

 private:
  std::uint64_t key_;
};

struct SampleEstimate {
  std::uint64_t seed = 0;
  std::vector<PairState> samples;
  double r_avg_hat = 0.0;
  double r_std = 0.0;      ///< sample standard deviation of r
  double r_std_error = 0.0;
  double c_mean_hat = 0.0;
  double c_s_hat = 0.0;    ///< sample standard deviation of c

  std::vector<SpinSnapshot> snapshots() const;
};

/// Draws `count` snapshots by inverse-CDF lookup. Draw k always uses counter
/// k, so splitting the draws over `workers` threads gives identical output.
SampleEstimate sample_snapshots(const SnapshotDistribution& distribution, std::size_t count, std::uint64_t seed,
                                unsigned workers = 1);

/// Full statevector over 2^(L-1) link configurations; bit j-1 of the index
/// is set when link j carries +1.
class SpinStateVector {
 public:
  SpinStateVector() = default;
  SpinStateVector(int sites, std::vector<Complex> amplitudes);

  int sites() const { return sites_; }
  int links() const { return sites_ - 1; }
  std::span<const Complex> amplitudes() const { return amplitudes_; }
  std::span<Complex> amplitudes() { return amplitudes_; }

  double norm() const;
  /// |<this|other>|^2
  double fidelity(const SpinStateVector& other) const;
  /// True when every configuration with nonzero amplitude has two domain walls.
  bool confined_to_two_walls() const;

 private:
  int sites_ = 0;
  std::vector<Complex> amplitudes_;
};

constexpr int kMaxSpinSites = 14;

/// Number of domain walls (= bosons) in a link configuration, counting the
/// -1 virtual links beyond both chain ends.
int domain_wall_count(std::uint64_t config, int links);

/// Configuration index of the pair state (i1, i2).
std::uint64_t spin_index(int i1, int i2);

SpinStateVector spin_state_from_sector(const WaveState& psi);
/// Sector amplitudes of a spin state; weight outside the sector is dropped.
WaveState sector_from_spin_state(const SpinStateVector& spin, std::shared_ptr<const TwoParticleBasis> basis);

struct TrotterTrajectory {
  std::vector<double> times;
  std::vector<SpinStateVector> states;
  double max_norm_drift = 0.0;  ///< max over steps of | ||psi|| - 1 |
  bool stayed_in_sector = true;
};

/// Strang splitting for H = -J sum_j P_j sigma^x_j + h sum_j sigma^z_j with
/// P_j = (1 - sigma^z_{j-1} sigma^z_{j+1}) / 2. Each step applies
/// field(dt/2), even links(dt/2), odd links(dt), even links(dt/2), field(dt/2).
/// The record holds step 0 and every `record_every`-th step (and the last).
/// Throws CapacityError for L > kMaxSpinSites.
TrotterTrajectory trotter_evolve_spin(int L, double J, double h, double theta, double dt, std::size_t steps,
                                      std::size_t record_every = 1);

/// The theta-tilted initial product state on the links.
SpinStateVector theta_spin_state(int L, double theta);

}  // namespace z2meson
