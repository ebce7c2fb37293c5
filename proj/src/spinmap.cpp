#include "z2meson/spinmap.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>

#include "z2meson/errors.hpp"

namespace z2meson {

std::string SpinSnapshot::encode() const {
  std::string s;
  s.reserve(spins.size());
  for (auto v : spins) s.push_back(v > 0 ? 'u' : 'd');
  return s;
}

SpinSnapshot snapshot_from_positions(int i1, int i2, int L) {
  LinkConfig cfg = links_from_positions(i1, i2, L);
  return SpinSnapshot{i1, i2, std::move(cfg.spins)};
}

bool is_two_wall_pattern(std::span<const std::int8_t> spins) { return positions_from_links(spins).has_value(); }

double SnapshotDistribution::total() const {
  double s = 0.0;
  for (double p : probabilities) s += p;
  return s;
}

std::vector<double> SnapshotDistribution::size_marginal() const {
  std::vector<double> out(static_cast<std::size_t>(std::max(sites - 1, 0)), 0.0);
  for (std::size_t k = 0; k < configurations.size(); ++k) out[configurations[k].r() - 1] += probabilities[k];
  return out;
}

double SnapshotDistribution::mean_size() const {
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < configurations.size(); ++k) {
    num += configurations[k].r() * probabilities[k];
    den += probabilities[k];
  }
  return den > 0.0 ? num / den : 0.0;
}

SnapshotDistribution sector_to_snapshot_distribution(const WaveState& psi) {
  SnapshotDistribution d;
  d.sites = psi.basis().sites();
  auto states = psi.basis().states();
  auto amps = psi.amplitudes();
  d.configurations.assign(states.begin(), states.end());
  d.probabilities.resize(amps.size());
  for (std::size_t k = 0; k < amps.size(); ++k) d.probabilities[k] = std::norm(amps[k]);
  return d;
}

CounterRng::CounterRng(std::uint64_t seed) : key_(splitmix64(seed)) {}

std::uint64_t CounterRng::splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t CounterRng::bits(std::uint64_t counter) const {
  return splitmix64(key_ + counter * 0x9E3779B97F4A7C15ULL);
}

double CounterRng::uniform(std::uint64_t counter) const {
  return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
}

std::vector<SpinSnapshot> SampleEstimate::snapshots() const {
  std::vector<SpinSnapshot> out;
  out.reserve(samples.size());
  int L = 0;
  for (const auto& s : samples) L = std::max(L, s.i1);
  for (const auto& s : samples) out.push_back(snapshot_from_positions(s.i1, s.i2, L));
  return out;
}

SampleEstimate sample_snapshots(const SnapshotDistribution& distribution, std::size_t count, std::uint64_t seed,
                                unsigned workers) {
  const std::size_t n = distribution.probabilities.size();
  if (n == 0) throw std::invalid_argument("sample_snapshots: empty distribution");
  if (count < 2) throw std::invalid_argument("sample_snapshots: need at least two snapshots");

  std::vector<double> cdf(n);
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (!(distribution.probabilities[k] >= 0.0)) throw std::invalid_argument("sample_snapshots: negative probability");
    acc += distribution.probabilities[k];
    cdf[k] = acc;
  }
  if (!(acc > 0.0)) throw std::invalid_argument("sample_snapshots: zero total probability");

  SampleEstimate est;
  est.seed = seed;
  est.samples.resize(count);
  const CounterRng rng(seed);
  auto draw_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const double u = rng.uniform(i) * acc;
      auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
      std::size_t k = static_cast<std::size_t>(it - cdf.begin());
      if (k >= n) k = n - 1;
      // never land on a zero-probability entry through a flat CDF step
      while (distribution.probabilities[k] == 0.0 && k > 0) --k;
      est.samples[i] = distribution.configurations[k];
    }
  };

  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::min<std::size_t>(count, 64))));
  if (workers == 1) {
    draw_range(0, count);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (count + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t b = w * chunk, e = std::min(count, b + chunk);
      if (b < e) pool.emplace_back(draw_range, b, e);
    }
    for (auto& t : pool) t.join();
  }

  double sr = 0.0, sc = 0.0;
  for (const auto& s : est.samples) {
    sr += s.r();
    sc += s.c();
  }
  const double m = static_cast<double>(count);
  est.r_avg_hat = sr / m;
  est.c_mean_hat = sc / m;
  double vr = 0.0, vc = 0.0;
  for (const auto& s : est.samples) {
    vr += (s.r() - est.r_avg_hat) * (s.r() - est.r_avg_hat);
    vc += (s.c() - est.c_mean_hat) * (s.c() - est.c_mean_hat);
  }
  est.r_std = std::sqrt(vr / (m - 1.0));
  est.c_s_hat = std::sqrt(vc / (m - 1.0));
  est.r_std_error = est.r_std / std::sqrt(m);
  return est;
}

SpinStateVector::SpinStateVector(int sites, std::vector<Complex> amplitudes)
    : sites_(sites), amplitudes_(std::move(amplitudes)) {
  if (sites < 2) throw std::invalid_argument("SpinStateVector: need L >= 2");
  if (sites > kMaxSpinSites) {
    throw CapacityError("spin statevector limited to L <= " + std::to_string(kMaxSpinSites) + ", got L=" +
                        std::to_string(sites));
  }
  if (amplitudes_.size() != (std::size_t{1} << (sites - 1))) {
    throw std::invalid_argument("SpinStateVector: amplitude count must be 2^(L-1)");
  }
}

double SpinStateVector::norm() const {
  double s = 0.0;
  for (const auto& a : amplitudes_) s += std::norm(a);
  return std::sqrt(s);
}

double SpinStateVector::fidelity(const SpinStateVector& other) const {
  if (other.amplitudes_.size() != amplitudes_.size()) throw std::invalid_argument("fidelity: size mismatch");
  Complex ov = 0.0;
  for (std::size_t k = 0; k < amplitudes_.size(); ++k) ov += std::conj(amplitudes_[k]) * other.amplitudes_[k];
  return std::norm(ov);
}

bool SpinStateVector::confined_to_two_walls() const {
  for (std::size_t x = 0; x < amplitudes_.size(); ++x) {
    if (amplitudes_[x] != Complex(0.0) && domain_wall_count(x, links()) != 2) return false;
  }
  return true;
}

int domain_wall_count(std::uint64_t config, int links) {
  // pad with the two virtual -1 links and count neighbouring differences
  const std::uint64_t padded = config << 1;
  const std::uint64_t diff = (padded ^ (padded >> 1)) & ((std::uint64_t{1} << (links + 1)) - 1);
  return std::popcount(diff);
}

std::uint64_t spin_index(int i1, int i2) {
  // links i2 .. i1-1 are raised, link j at bit j-1
  return ((std::uint64_t{1} << (i1 - i2)) - 1) << (i2 - 1);
}

SpinStateVector spin_state_from_sector(const WaveState& psi) {
  const int L = psi.basis().sites();
  if (L > kMaxSpinSites) {
    throw CapacityError("spin statevector limited to L <= " + std::to_string(kMaxSpinSites));
  }
  std::vector<Complex> amps(std::size_t{1} << (L - 1), 0.0);
  auto states = psi.basis().states();
  for (std::size_t k = 0; k < states.size(); ++k) amps[spin_index(states[k].i1, states[k].i2)] = psi.amplitudes()[k];
  return SpinStateVector(L, std::move(amps));
}

WaveState sector_from_spin_state(const SpinStateVector& spin, std::shared_ptr<const TwoParticleBasis> basis) {
  if (!basis || basis->sites() != spin.sites()) throw std::invalid_argument("sector_from_spin_state: basis mismatch");
  std::vector<Complex> amps(basis->size());
  auto states = basis->states();
  for (std::size_t k = 0; k < states.size(); ++k) amps[k] = spin.amplitudes()[spin_index(states[k].i1, states[k].i2)];
  return WaveState(std::move(basis), std::move(amps));
}

SpinStateVector theta_spin_state(int L, double theta) {
  if (L > kMaxSpinSites) {
    throw CapacityError("spin statevector limited to L <= " + std::to_string(kMaxSpinSites));
  }
  auto basis = std::make_shared<const TwoParticleBasis>(L);
  return spin_state_from_sector(initial_theta_state(basis, theta));
}

namespace {

struct SpinPropagator {
  int links;
  std::vector<Complex> field_half;  // exp(-i h dt/2 sum sigma^z) per configuration
  double c_half, s_half, c_full, s_full;

  SpinPropagator(int L, double J, double h, double dt) : links(L - 1) {
    const std::size_t dim = std::size_t{1} << links;
    field_half.resize(dim);
    for (std::size_t x = 0; x < dim; ++x) {
      const int up = std::popcount(x);
      const double sz = 2.0 * up - links;
      field_half[x] = std::polar(1.0, -h * sz * 0.5 * dt);
    }
    // exp(+i J tau sigma^x) restricted to an allowed pair
    c_half = std::cos(0.5 * J * dt);
    s_half = std::sin(0.5 * J * dt);
    c_full = std::cos(J * dt);
    s_full = std::sin(J * dt);
  }

  void field(std::vector<Complex>& a) const {
    for (std::size_t x = 0; x < a.size(); ++x) a[x] *= field_half[x];
  }

  // all links j with j % 2 == parity; they commute because P_j only reads j +- 1
  void flips(std::vector<Complex>& a, int parity, double c, double s) const {
    const Complex is(0.0, s);
    for (int j = 1; j <= links; ++j) {
      if (j % 2 != parity) continue;
      const std::uint64_t bit = std::uint64_t{1} << (j - 1);
      for (std::size_t x = 0; x < a.size(); ++x) {
        if (x & bit) continue;
        const int left = j > 1 ? static_cast<int>((x >> (j - 2)) & 1) : 0;
        const int right = j < links ? static_cast<int>((x >> j) & 1) : 0;
        if (left == right) continue;
        const std::size_t y = x | bit;
        const Complex ax = a[x], ay = a[y];
        a[x] = c * ax + is * ay;
        a[y] = c * ay + is * ax;
      }
    }
  }

  void step(std::vector<Complex>& a) const {
    field(a);
    flips(a, 0, c_half, s_half);
    flips(a, 1, c_full, s_full);
    flips(a, 0, c_half, s_half);
    field(a);
  }
};

}  // namespace

TrotterTrajectory trotter_evolve_spin(int L, double J, double h, double theta, double dt, std::size_t steps,
                                      std::size_t record_every) {
  if (L > kMaxSpinSites) {
    throw CapacityError("spin statevector limited to L <= " + std::to_string(kMaxSpinSites) + ", got L=" +
                        std::to_string(L));
  }
  if (!(dt > 0.0)) throw std::invalid_argument("trotter_evolve_spin: dt must be positive");
  if (record_every == 0) record_every = steps == 0 ? 1 : steps;

  SpinStateVector state = theta_spin_state(L, theta);
  std::vector<Complex> a(state.amplitudes().begin(), state.amplitudes().end());
  const SpinPropagator prop(L, J, h, dt);

  TrotterTrajectory out;
  out.times.push_back(0.0);
  out.states.push_back(state);
  for (std::size_t n = 1; n <= steps; ++n) {
    prop.step(a);
    double nn = 0.0;
    for (const auto& v : a) nn += std::norm(v);
    out.max_norm_drift = std::max(out.max_norm_drift, std::abs(std::sqrt(nn) - 1.0));
    if (n % record_every == 0 || n == steps) {
      SpinStateVector snap(L, a);
      if (!snap.confined_to_two_walls()) out.stayed_in_sector = false;
      out.times.push_back(static_cast<double>(n) * dt);
      out.states.push_back(std::move(snap));
    }
  }
  return out;
}

}  // namespace z2meson
