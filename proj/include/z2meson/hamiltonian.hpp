#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "z2meson/basis.hpp"

namespace z2meson {

class DenseMatrix;

struct MatrixEntry {
  std::size_t row = 0;
  std::size_t col = 0;
  double value = 0.0;
};

/// Real symmetric operator stored as its upper triangle (row <= col).
class SparseSymmetricOperator {
 public:
  SparseSymmetricOperator() = default;
  SparseSymmetricOperator(std::size_t dimension, std::vector<MatrixEntry> upper);

  std::size_t dimension() const { return dimension_; }
  std::span<const MatrixEntry> entries() const { return entries_; }

  /// y = H x
  void apply(std::span<const double> x, std::span<double> y) const;
  void apply(std::span<const std::complex<double>> x, std::span<std::complex<double>> y) const;

  /// <x|H|x> for a (not necessarily normalized) complex vector.
  double expectation(std::span<const std::complex<double>> x) const;

  DenseMatrix to_dense() const;

  /// Triplet dump "row col value" (1-based), preceded by a size line, in the
  /// coordinate layout of the matrix-market format. Both triangles are written.
  void write_triplets(std::ostream& out) const;

 private:
  std::size_t dimension_ = 0;
  std::vector<MatrixEntry> entries_;
};

/// Two-boson sector Hamiltonian on an open chain: 2h r on the diagonal and -J
/// between configurations related by a single boson hop. Hops that would
/// merge the bosons or leave the chain are absent.
SparseSymmetricOperator build_sector_hamiltonian(const TwoParticleBasis& basis, double J, double h);

/// Relative-coordinate block at center-of-mass momentum k (infinite chain):
/// diagonal 2h r for r = 1..r_max, constant off-diagonal -2J cos(k/2), hard
/// walls below r = 1 and above r_max.
struct TridiagonalOperator {
  std::vector<double> diagonal;
  double off_diagonal = 0.0;
  double k = 0.0;

  int r_max() const { return static_cast<int>(diagonal.size()); }
  DenseMatrix to_dense() const;
};

/// Throws std::invalid_argument for r_max < 2 or |k| > 2 pi.
TridiagonalOperator build_momentum_block(double k, double J, double h, int r_max);

/// max(50, ceil(10 J / h) + 20); grows as h shrinks so Airy tails fit.
int default_r_max(double J, double h);

}  // namespace z2meson
