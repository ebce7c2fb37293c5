#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "support/oracles.hpp"
#include "z2meson/dynamics.hpp"
#include "z2meson/eigensolver.hpp"
#include "z2meson/errors.hpp"

using namespace z2meson;

namespace {

DenseMatrix random_symmetric(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> dist;
  DenseMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) a(i, j) = a(j, i) = dist(gen);
  return a;
}

double max_abs_eigenvalue(const Spectrum& s) {
  double m = 0.0;
  for (double v : s.eigenvalues) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

TEST_SUITE("eigensolver") {
  TEST_CASE("two-level hopping") {
    const double J = 0.7;
    DenseMatrix a(2, 2);
    a(0, 1) = a(1, 0) = -J;
    const Spectrum s = eig_symmetric(a);
    CHECK(s.eigenvalues[0] == doctest::Approx(-J));
    CHECK(s.eigenvalues[1] == doctest::Approx(J));
  }

  TEST_CASE("three-site sector against the characteristic cubic") {
    const double J = 1.0, h = 1.0;
    const SparseSymmetricOperator H = build_sector_hamiltonian(TwoParticleBasis(3), J, h);
    const Spectrum s = eig_symmetric(H);
    // basis (r=1,cc=3), (r=1,cc=5), (r=2,cc=4): diag(2h, 2h, 4h), both r=1 states couple to r=2
    // det(x - H) = (x-2h)^2 (x-4h) - 2 J^2 (x-2h)
    const double a = 2 * h, c = 4 * h;
    const auto roots = oracle::cubic_roots(-(2 * a + c), a * a + 2 * a * c - 2 * J * J, -(a * a * c) + 2 * J * J * a);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(s.eigenvalues[i] - roots[i]) <= 1e-10);
  }

  TEST_CASE("decoupled block returns its diagonal") {
    const Spectrum s = eig_tridiagonal(build_momentum_block(std::numbers::pi, 1.0, 0.9, 25));
    for (int r = 1; r <= 25; ++r) CHECK(s.eigenvalues[r - 1] == 2 * 0.9 * r);
    TridiagonalOperator zero{{3.0, -1.0, 2.0}, 0.0, 0.0};
    const Spectrum z = eig_tridiagonal(zero);
    CHECK(z.eigenvalues == std::vector<double>{-1.0, 2.0, 3.0});
  }

  TEST_CASE("strong-field eigenvector peaks at r = n with a small neighbor") {
    const double J = 1.0, h = 5.0;
    const Spectrum s = eig_tridiagonal(build_momentum_block(0.0, J, h, 50));
    for (int n = 2; n <= 4; ++n) {
      const auto v = s.mode(n - 1);
      std::size_t peak = 0;
      for (std::size_t r = 0; r < v.size(); ++r)
        if (std::abs(v[r]) > std::abs(v[peak])) peak = r;
      CHECK(static_cast<int>(peak) + 1 == n);
      const double ratio = std::abs(v[n] / v[n - 1]);
      const double expected = 2 * J / (2 * h);
      CHECK(std::abs(ratio - expected) <= 0.2 * expected);
    }
  }

  TEST_CASE("tridiagonal path agrees with the dense path") {
    const TridiagonalOperator block = build_momentum_block(0.9, 1.0, 0.4, 60);
    const Spectrum t = eig_tridiagonal(block);
    const Spectrum d = eig_symmetric(block.to_dense());
    for (std::size_t i = 0; i < t.size(); ++i) CHECK(std::abs(t.eigenvalues[i] - d.eigenvalues[i]) <= 1e-10);
    const auto fast = tridiagonal_eigenvalues(block.diagonal, std::vector<double>(59, block.off_diagonal));
    for (std::size_t i = 0; i < t.size(); ++i) CHECK(std::abs(t.eigenvalues[i] - fast[i]) <= 1e-10);
  }

  TEST_CASE("random matrices reconstruct and stay orthonormal") {
    for (std::size_t n : {1u, 2u, 3u, 17u, 31u, 32u, 33u, 65u, 200u, 500u}) {
      const DenseMatrix a = random_symmetric(n, 1000 + n);
      const Spectrum s = eig_symmetric(a);
      CHECK(std::is_sorted(s.eigenvalues.begin(), s.eigenvalues.end()));
      CHECK(orthogonality_error(s) <= 1e-9);
      CHECK(reconstruction_error(s, a) <= 1e-8 * std::max(1.0, max_abs_eigenvalue(s)));
    }
  }

  TEST_CASE("degenerate clusters are orthonormalized") {
    const std::size_t n = 60;
    DenseMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) a(i, i) = static_cast<double>(i % 3);
    const Spectrum s = eig_symmetric(a);
    CHECK(orthogonality_error(s) <= 1e-12);
    CHECK(reconstruction_error(s, a) <= 1e-12);
  }

  TEST_CASE("sector spectrum invariants") {
    const TwoParticleBasis b(16);
    const SparseSymmetricOperator H = build_sector_hamiltonian(b, 1.0, 0.7);
    const Spectrum s = eig_symmetric(H);
    CHECK(std::is_sorted(s.eigenvalues.begin(), s.eigenvalues.end()));
    CHECK(orthogonality_error(s) <= 1e-9);
    CHECK(s.max_residual <= 1e-8 * max_abs_eigenvalue(s));
    CHECK(reconstruction_error(s, H.to_dense()) <= 1e-8 * max_abs_eigenvalue(s));
  }

  TEST_CASE("mirror-split solve matches the direct solve") {
    const TwoParticleBasis b(14);
    const SparseSymmetricOperator H = build_sector_hamiltonian(b, 1.0, 0.45);
    const Spectrum direct = eig_symmetric(H);
    const Spectrum split = sector_spectrum(b, H);
    REQUIRE(split.size() == direct.size());
    for (std::size_t i = 0; i < direct.size(); ++i)
      CHECK(std::abs(split.eigenvalues[i] - direct.eigenvalues[i]) <= 1e-10);
    CHECK(orthogonality_error(split) <= 1e-9);
    CHECK(split.max_residual <= 1e-8 * max_abs_eigenvalue(split));
  }

  TEST_CASE("mirror split rejects a non-commuting permutation") {
    const TwoParticleBasis b(6);
    const SparseSymmetricOperator H = build_sector_hamiltonian(b, 1.0, 0.5);
    std::vector<std::size_t> perm(b.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::swap(perm[0], perm[b.size() - 1]);
    CHECK_THROWS_AS(eig_symmetric_reflected(H, perm, {}), std::invalid_argument);
    perm[0] = 1;
    CHECK_THROWS_AS(eig_symmetric_reflected(H, perm, {}), std::invalid_argument);
  }

  TEST_CASE("dimension over the dense limit is a capacity error") {
    const SparseSymmetricOperator H = build_sector_hamiltonian(TwoParticleBasis(10), 1.0, 1.0);
    EigenOptions small;
    small.dense_limit = 20;
    CHECK_THROWS_AS(eig_symmetric(H, small), CapacityError);
  }

  TEST_CASE("identical input gives a bitwise identical spectrum") {
    const TwoParticleBasis b(18);
    const SparseSymmetricOperator H = build_sector_hamiltonian(b, 1.0, 1.1);
    const Spectrum a = sector_spectrum(b, H);
    const Spectrum c = sector_spectrum(b, H);
    CHECK(a.eigenvalues == c.eigenvalues);
    CHECK(a.modes == c.modes);
  }
}
