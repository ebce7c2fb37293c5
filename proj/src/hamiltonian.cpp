#include "z2meson/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

#include "z2meson/dense.hpp"

namespace z2meson {

SparseSymmetricOperator::SparseSymmetricOperator(std::size_t dimension, std::vector<MatrixEntry> upper)
    : dimension_(dimension), entries_(std::move(upper)) {
  for (auto& e : entries_) {
    if (e.row > e.col) std::swap(e.row, e.col);
    if (e.col >= dimension_) throw std::invalid_argument("SparseSymmetricOperator: entry out of range");
  }
  std::sort(entries_.begin(), entries_.end(), [](const MatrixEntry& a, const MatrixEntry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
}

namespace {

template <typename T>
void apply_impl(std::span<const MatrixEntry> entries, std::size_t n, std::span<const T> x, std::span<T> y) {
  if (x.size() != n || y.size() != n) throw std::invalid_argument("SparseSymmetricOperator::apply: size mismatch");
  std::fill(y.begin(), y.end(), T{});
  for (const auto& e : entries) {
    y[e.row] += e.value * x[e.col];
    if (e.row != e.col) y[e.col] += e.value * x[e.row];
  }
}

}  // namespace

void SparseSymmetricOperator::apply(std::span<const double> x, std::span<double> y) const {
  apply_impl<double>(entries_, dimension_, x, y);
}

void SparseSymmetricOperator::apply(std::span<const std::complex<double>> x,
                                    std::span<std::complex<double>> y) const {
  apply_impl<std::complex<double>>(entries_, dimension_, x, y);
}

double SparseSymmetricOperator::expectation(std::span<const std::complex<double>> x) const {
  if (x.size() != dimension_) throw std::invalid_argument("SparseSymmetricOperator::expectation: size mismatch");
  double total = 0.0;
  for (const auto& e : entries_) {
    const double diag = std::real(std::conj(x[e.row]) * x[e.col]);
    total += (e.row == e.col ? 1.0 : 2.0) * e.value * diag;
  }
  return total;
}

DenseMatrix SparseSymmetricOperator::to_dense() const {
  DenseMatrix m(dimension_, dimension_);
  for (const auto& e : entries_) {
    m(e.row, e.col) += e.value;
    if (e.row != e.col) m(e.col, e.row) += e.value;
  }
  return m;
}

void SparseSymmetricOperator::write_triplets(std::ostream& out) const {
  std::size_t count = 0;
  for (const auto& e : entries_) count += (e.row == e.col) ? 1 : 2;
  out << dimension_ << ' ' << dimension_ << ' ' << count << '\n';
  out.precision(17);
  for (const auto& e : entries_) {
    out << e.row + 1 << ' ' << e.col + 1 << ' ' << e.value << '\n';
    if (e.row != e.col) out << e.col + 1 << ' ' << e.row + 1 << ' ' << e.value << '\n';
  }
}

SparseSymmetricOperator build_sector_hamiltonian(const TwoParticleBasis& basis, double J, double h) {
  const int L = basis.sites();
  std::vector<MatrixEntry> entries;
  entries.reserve(basis.size() * 3);
  for (std::size_t idx = 0; idx < basis.size(); ++idx) {
    const PairState& s = basis.state(idx);
    entries.push_back({idx, idx, 2.0 * h * s.r()});
    // Each bond of the configuration graph is a single boson moving right,
    // counted once from its left end.
    if (s.i1 + 1 <= L) {
      auto to = *basis.index_of_sites(s.i1 + 1, s.i2);
      entries.push_back({std::min(idx, to), std::max(idx, to), -J});
    }
    if (s.i2 + 1 < s.i1) {
      auto to = *basis.index_of_sites(s.i1, s.i2 + 1);
      entries.push_back({std::min(idx, to), std::max(idx, to), -J});
    }
  }
  return SparseSymmetricOperator(basis.size(), std::move(entries));
}

DenseMatrix TridiagonalOperator::to_dense() const {
  const std::size_t n = diagonal.size();
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = diagonal[i];
    if (i + 1 < n) m(i, i + 1) = m(i + 1, i) = off_diagonal;
  }
  return m;
}

TridiagonalOperator build_momentum_block(double k, double J, double h, int r_max) {
  if (r_max < 2) throw std::invalid_argument("build_momentum_block: r_max must be >= 2, got " + std::to_string(r_max));
  if (!(std::abs(k) <= 2.0 * std::numbers::pi + 1e-12)) {
    throw std::invalid_argument("build_momentum_block: |k| must not exceed 2 pi");
  }
  TridiagonalOperator block;
  block.k = k;
  block.diagonal.resize(static_cast<std::size_t>(r_max));
  for (int r = 1; r <= r_max; ++r) block.diagonal[r - 1] = 2.0 * h * r;
  // cos(pi/2) is not exactly zero in floating point; pin the decoupled point.
  const double half = 0.5 * k;
  const double c = (std::abs(std::abs(half) - std::numbers::pi / 2) < 1e-15) ? 0.0 : std::cos(half);
  block.off_diagonal = -2.0 * J * c;
  return block;
}

int default_r_max(double J, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("default_r_max: h must be positive");
  return std::max(50, static_cast<int>(std::ceil(10.0 * J / h)) + 20);
}

}  // namespace z2meson
