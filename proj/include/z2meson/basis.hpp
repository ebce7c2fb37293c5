#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace z2meson {

/// Positions of the two hard-core bosons on an open chain with sites 1..L,
/// ordered so that i1 > i2.
struct PairState {
  int i1 = 0;
  int i2 = 0;

  /// Relative coordinate (meson size), r = i1 - i2.
  int r() const { return i1 - i2; }
  /// Doubled center of mass, cc = i1 + i2 = 2c.
  int cc() const { return i1 + i2; }
  double c() const { return 0.5 * cc(); }

  bool operator==(const PairState&) const = default;
};

/// Two-boson configuration space of an open L-site chain.
///
/// States are stored sorted by (r, cc). For a fixed r the admissible cc run
/// over r+2, r+4, ..., 2L-r, so both index maps are closed-form and O(1).
class TwoParticleBasis {
 public:
  /// Throws std::invalid_argument for L < 2.
  explicit TwoParticleBasis(int L);

  int sites() const { return sites_; }
  std::size_t size() const { return states_.size(); }
  std::span<const PairState> states() const { return states_; }
  const PairState& state(std::size_t index) const { return states_.at(index); }

  /// Dense index of (i1, i2); nullopt when the pair is not a valid state.
  std::optional<std::size_t> index_of_sites(int i1, int i2) const;
  /// Dense index of (r, cc); nullopt when outside the chain or parity-violating.
  std::optional<std::size_t> index_of_relative(int r, int cc) const;

  /// Index of the mirror image (i1, i2) -> (L+1-i2, L+1-i1), i.e. cc -> 2L+2-cc.
  std::size_t mirror_index(std::size_t index) const;

  /// Number of states carrying meson size r (equals L - r).
  std::size_t count_with_size(int r) const;

 private:
  int sites_;
  std::vector<PairState> states_;
  std::vector<std::size_t> offset_by_size_;  // indexed by r, size L+1
};

TwoParticleBasis build_basis(int L);

/// Link spins and site occupations reconstructed from the Gauss law.
struct LinkConfig {
  /// spins[j-1] is sigma^z on link (j, j+1), j = 1..L-1.
  std::vector<std::int8_t> spins;
  /// occupations[i-1] is n_i, i = 1..L.
  std::vector<std::int8_t> occupations;

  int sites() const { return static_cast<int>(occupations.size()); }
  /// sigma^z on link (j, j+1); the virtual links j = 0 and j = L are -1.
  int link(int j) const;
};

/// Throws std::invalid_argument unless 1 <= i2 < i1 <= L.
LinkConfig links_from_positions(int i1, int i2, int L);

/// G_i = sigma^z_{i-1,i} (-1)^{n_i} sigma^z_{i,i+1}, with -1 exterior links.
int gauss_generator(const LinkConfig& config, int site);
bool satisfies_gauss_law(const LinkConfig& config);

/// Number of +1 links, which sets the electric-field energy 2h * count.
int raised_link_count(const LinkConfig& config);

/// Inverse map for the two-particle sector: the (i1, i2) of a spin pattern
/// holding a single contiguous block of +1 links, or nullopt otherwise.
std::optional<PairState> positions_from_links(std::span<const std::int8_t> spins);

}  // namespace z2meson
