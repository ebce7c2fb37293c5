#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "z2meson/dense.hpp"
#include "z2meson/hamiltonian.hpp"

namespace z2meson {

/// Eigenpairs of a real symmetric operator.
///
/// `modes` holds one eigenvector per row: modes.row(j) pairs with
/// eigenvalues[j]. Eigenvalues are ascending.
struct Spectrum {
  std::vector<double> eigenvalues;
  DenseMatrix modes;
  double max_residual = 0.0;  ///< max_j ||H v_j - lambda_j v_j||_2

  std::size_t size() const { return eigenvalues.size(); }
  std::span<const double> mode(std::size_t j) const { return modes.row(j); }
};

struct EigenOptions {
  /// Largest dimension handled by the dense path.
  std::size_t dense_limit = 8000;
  /// Relative gap (w.r.t. the spectral scale) below which eigenvalues are
  /// treated as one degenerate cluster and re-orthonormalized.
  double cluster_tolerance = 1e-9;
};

/// Householder tridiagonalization followed by implicit-shift QL.
/// Throws CapacityError when the dimension exceeds options.dense_limit.
Spectrum eig_symmetric(const SparseSymmetricOperator& op, const EigenOptions& options = {});
Spectrum eig_symmetric(const DenseMatrix& matrix, const EigenOptions& options = {});

/// Same result as eig_symmetric, but splits the problem into the even and
/// odd sectors of an involution P (P[P[i]] == i) that commutes with `op`.
/// Each sector is diagonalized separately and the modes are embedded back
/// into the full space. Throws std::invalid_argument if P is not an
/// involution or does not commute with `op`.
Spectrum eig_symmetric_reflected(const SparseSymmetricOperator& op, std::span<const std::size_t> involution,
                                 const EigenOptions& options = {});

/// Implicit QL on a tridiagonal block, starting from the identity.
Spectrum eig_tridiagonal(const TridiagonalOperator& op, const EigenOptions& options = {});

/// Eigenvalues only; O(n^2).
std::vector<double> tridiagonal_eigenvalues(std::span<const double> diagonal, std::span<const double> off_diagonal);

/// max_ij |(V diag(lambda) V^T)_ij - H_ij|
double reconstruction_error(const Spectrum& spectrum, const DenseMatrix& matrix);
/// max_ij |(V^T V - I)_ij|
double orthogonality_error(const Spectrum& spectrum);

}  // namespace z2meson
