#include "z2meson/basis.hpp"

#include <stdexcept>
#include <string>

namespace z2meson {

TwoParticleBasis::TwoParticleBasis(int L) : sites_(L) {
  if (L < 2) {
    throw std::invalid_argument("TwoParticleBasis: need at least 2 sites, got " + std::to_string(L));
  }
  offset_by_size_.assign(static_cast<std::size_t>(L) + 1, 0);
  states_.reserve(static_cast<std::size_t>(L) * (L - 1) / 2);
  for (int r = 1; r <= L - 1; ++r) {
    offset_by_size_[r] = states_.size();
    for (int cc = r + 2; cc <= 2 * L - r; cc += 2) {
      states_.push_back({(cc + r) / 2, (cc - r) / 2});
    }
  }
  offset_by_size_[L] = states_.size();
}

std::optional<std::size_t> TwoParticleBasis::index_of_sites(int i1, int i2) const {
  if (i2 < 1 || i1 > sites_ || i1 <= i2) return std::nullopt;
  return index_of_relative(i1 - i2, i1 + i2);
}

std::optional<std::size_t> TwoParticleBasis::index_of_relative(int r, int cc) const {
  if (r < 1 || r > sites_ - 1) return std::nullopt;
  if (cc < r + 2 || cc > 2 * sites_ - r || (cc - r) % 2 != 0) return std::nullopt;
  return offset_by_size_[r] + static_cast<std::size_t>((cc - r - 2) / 2);
}

std::size_t TwoParticleBasis::mirror_index(std::size_t index) const {
  const PairState& s = states_.at(index);
  return *index_of_relative(s.r(), 2 * sites_ + 2 - s.cc());
}

std::size_t TwoParticleBasis::count_with_size(int r) const {
  if (r < 1 || r > sites_ - 1) return 0;
  return offset_by_size_[r + 1] - offset_by_size_[r];
}

TwoParticleBasis build_basis(int L) { return TwoParticleBasis(L); }

int LinkConfig::link(int j) const {
  if (j <= 0 || j >= sites()) return -1;
  return spins[static_cast<std::size_t>(j - 1)];
}

LinkConfig links_from_positions(int i1, int i2, int L) {
  if (L < 2 || i2 < 1 || i1 > L || i1 <= i2) {
    throw std::invalid_argument("links_from_positions: need 1 <= i2 < i1 <= L, got i1=" +
                                std::to_string(i1) + " i2=" + std::to_string(i2) +
                                " L=" + std::to_string(L));
  }
  LinkConfig config;
  config.spins.assign(static_cast<std::size_t>(L - 1), -1);
  config.occupations.assign(static_cast<std::size_t>(L), 0);
  config.occupations[i1 - 1] = 1;
  config.occupations[i2 - 1] = 1;
  for (int j = i2; j < i1; ++j) config.spins[j - 1] = 1;
  return config;
}

int gauss_generator(const LinkConfig& config, int site) {
  const int parity = config.occupations.at(static_cast<std::size_t>(site - 1)) ? -1 : 1;
  return config.link(site - 1) * parity * config.link(site);
}

bool satisfies_gauss_law(const LinkConfig& config) {
  for (int i = 1; i <= config.sites(); ++i) {
    if (gauss_generator(config, i) != 1) return false;
  }
  return true;
}

int raised_link_count(const LinkConfig& config) {
  int count = 0;
  for (auto s : config.spins) count += (s > 0);
  return count;
}

std::optional<PairState> positions_from_links(std::span<const std::int8_t> spins) {
  // A boson sits on site i exactly where sigma_{i-1,i} != sigma_{i,i+1}.
  const int links = static_cast<int>(spins.size());
  auto at = [&](int j) { return (j <= 0 || j > links) ? -1 : static_cast<int>(spins[j - 1]); };
  int found = 0;
  int walls[2] = {0, 0};
  for (int site = 1; site <= links + 1; ++site) {
    if (at(site - 1) != at(site)) {
      if (found == 2) return std::nullopt;
      walls[found++] = site;
    }
  }
  if (found != 2) return std::nullopt;
  return PairState{walls[1], walls[0]};
}

}  // namespace z2meson
