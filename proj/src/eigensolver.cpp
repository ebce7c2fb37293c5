#include "z2meson/eigensolver.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "z2meson/errors.hpp"

namespace z2meson {
namespace {

void check_capacity(std::size_t n, const EigenOptions& options) {
  if (n > options.dense_limit) {
    throw CapacityError("dense eigensolver: dimension " + std::to_string(n) + " exceeds the limit of " +
                        std::to_string(options.dense_limit) +
                        "; use iterative propagation or raise the dense limit");
  }
}

double dot(const double* __restrict a, const double* __restrict b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy(double alpha, const double* __restrict x, double* __restrict y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

constexpr std::size_t kPanel = 32;

// Q = H_0 H_1 ... H_{n-3} with H_k = I - beta_k v_k v_k^T and v_k stored in
// a(k, k+1:). Reflectors are applied backwards in blocks as I - V T V^T.
DenseMatrix accumulate_reflectors(const DenseMatrix& a, const std::vector<double>& beta) {
  const std::size_t n = a.rows();
  DenseMatrix q = DenseMatrix::identity(n);
  if (n < 3) return q;
  const std::size_t count = n - 2;
  std::vector<double> vb, t, w;
  for (std::size_t stop = count; stop > 0;) {
    const std::size_t k0 = stop > kPanel ? stop - kPanel : 0;
    const std::size_t nb = stop - k0;
    const std::size_t r0 = k0 + 1;
    const std::size_t m = n - r0;
    // V: m x nb, row-major; column l holds v_{k0+l} (zero above its start)
    vb.assign(m * nb, 0.0);
    for (std::size_t l = 0; l < nb; ++l) {
      const std::size_t k = k0 + l;
      const double* v = a.row(k).data();
      for (std::size_t r = k + 1; r < n; ++r) vb[(r - r0) * nb + l] = v[r];
    }
    // T upper triangular with H_{k0} ... H_{stop-1} = I - V T V^T
    t.assign(nb * nb, 0.0);
    std::vector<double> z(nb);
    for (std::size_t j = 0; j < nb; ++j) {
      const double bj = beta[k0 + j];
      t[j * nb + j] = bj;
      if (j == 0) continue;
      std::fill(z.begin(), z.end(), 0.0);
      for (std::size_t r = j; r < m; ++r) {
        const double vj = vb[r * nb + j];
        if (vj == 0.0) continue;
        for (std::size_t l = 0; l < j; ++l) z[l] += vb[r * nb + l] * vj;
      }
      for (std::size_t l = 0; l < j; ++l) {
        double acc = 0.0;
        for (std::size_t p = l; p < j; ++p) acc += t[l * nb + p] * z[p];
        t[l * nb + j] = -bj * acc;
      }
    }
    // W = T (V^T Q[r0:, r0:]);  Q[r0:, r0:] -= V W
    w.assign(nb * m, 0.0);
    for (std::size_t r = 0; r < m; ++r) {
      const double* qrow = q.row(r0 + r).data() + r0;
      for (std::size_t l = 0; l < nb; ++l) {
        const double v = vb[r * nb + l];
        if (v != 0.0) axpy(v, qrow, w.data() + l * m, m);
      }
    }
    for (std::size_t l = 0; l < nb; ++l) {
      double* wl = w.data() + l * m;
      for (std::size_t c = 0; c < m; ++c) wl[c] *= t[l * nb + l];
      for (std::size_t p = l + 1; p < nb; ++p) {
        if (t[l * nb + p] != 0.0) axpy(t[l * nb + p], w.data() + p * m, wl, m);
      }
    }
    for (std::size_t r = 0; r < m; ++r) {
      double* qrow = q.row(r0 + r).data() + r0;
      for (std::size_t l = 0; l < nb; ++l) {
        const double v = vb[r * nb + l];
        if (v != 0.0) axpy(-v, w.data() + l * m, qrow, m);
      }
    }
    stop = k0;
  }
  return q;
}

// Reduces the symmetric matrix `a` to tridiagonal form T = Q^T A Q, reading
// and updating only the lower triangle. Columns are processed in panels whose
// updates to the trailing block are deferred and applied as one rank-2*nb
// update. On return d/e hold the diagonal and the sub-diagonal (e[i] couples
// i and i+1, e[n-1] = 0) and the function returns Q^T.
DenseMatrix householder_tridiagonalize(DenseMatrix& a, std::vector<double>& d, std::vector<double>& e) {
  const std::size_t n = a.rows();
  d.assign(n, 0.0);
  e.assign(n, 0.0);
  std::vector<double> beta(n, 0.0);
  // panel reflectors and their companions, row-major n x kPanel
  std::vector<double> vp(n * kPanel), wp(n * kPanel);
  std::vector<double> vt(kPanel * n), wt(kPanel * n);
  std::vector<double> v(n), y(n), t1(kPanel), t2(kPanel);

  const std::size_t reflectors = n >= 2 ? n - 2 : 0;
  for (std::size_t k0 = 0; k0 < reflectors; k0 += kPanel) {
    const std::size_t nb = std::min(kPanel, reflectors - k0);
    std::fill(vp.begin(), vp.end(), 0.0);
    std::fill(wp.begin(), wp.end(), 0.0);
    for (std::size_t j = 0; j < nb; ++j) {
      const std::size_t k = k0 + j;
      // bring column k up to date with the earlier reflectors of this panel
      if (j > 0) {
        const double* vk = &vp[k * kPanel];
        const double* wk = &wp[k * kPanel];
        for (std::size_t i = k; i < n; ++i) {
          const double* vi = &vp[i * kPanel];
          const double* wi = &wp[i * kPanel];
          double s = 0.0;
          for (std::size_t l = 0; l < j; ++l) s += vi[l] * wk[l] + wi[l] * vk[l];
          a(i, k) -= s;
        }
      }
      d[k] = a(k, k);
      const std::size_t s0 = k + 1;
      const std::size_t m = n - s0;
      for (std::size_t i = 0; i < m; ++i) v[i] = a(s0 + i, k);
      const double tail = dot(v.data() + 1, v.data() + 1, m - 1);
      if (tail == 0.0) {
        e[k] = v[0];
        beta[k] = 0.0;
        for (std::size_t i = 0; i < m; ++i) a(k, s0 + i) = 0.0;
        continue;
      }
      const double norm = std::sqrt(v[0] * v[0] + tail);
      const double alpha = v[0] > 0.0 ? -norm : norm;
      v[0] -= alpha;
      const double b = 2.0 / (v[0] * v[0] + tail);
      beta[k] = b;
      e[k] = alpha;
      for (std::size_t i = 0; i < m; ++i) {
        a(k, s0 + i) = v[i];
        vp[(s0 + i) * kPanel + j] = v[i];
      }

      // y = A22 v from the lower triangle
      std::fill(y.begin(), y.begin() + m, 0.0);
      for (std::size_t i = 0; i < m; ++i) {
        const double* row = a.row(s0 + i).data() + s0;
        const double vi = v[i];
        double acc = 0.0;
        for (std::size_t c = 0; c < i; ++c) {
          acc += row[c] * v[c];
          y[c] += row[c] * vi;
        }
        y[i] += acc + row[i] * vi;
      }
      // minus the deferred part V W^T + W V^T
      if (j > 0) {
        std::fill(t1.begin(), t1.end(), 0.0);
        std::fill(t2.begin(), t2.end(), 0.0);
        for (std::size_t i = 0; i < m; ++i) {
          const double* vi = &vp[(s0 + i) * kPanel];
          const double* wi = &wp[(s0 + i) * kPanel];
          for (std::size_t l = 0; l < j; ++l) {
            t1[l] += wi[l] * v[i];
            t2[l] += vi[l] * v[i];
          }
        }
        for (std::size_t i = 0; i < m; ++i) {
          const double* vi = &vp[(s0 + i) * kPanel];
          const double* wi = &wp[(s0 + i) * kPanel];
          double s = 0.0;
          for (std::size_t l = 0; l < j; ++l) s += vi[l] * t1[l] + wi[l] * t2[l];
          y[i] -= s;
        }
      }
      for (std::size_t i = 0; i < m; ++i) y[i] *= b;
      const double kappa = 0.5 * b * dot(y.data(), v.data(), m);
      for (std::size_t i = 0; i < m; ++i) wp[(s0 + i) * kPanel + j] = y[i] - kappa * v[i];
    }

    // trailing update A22 -= V W^T + W V^T on the lower triangle
    const std::size_t s0 = k0 + nb;
    for (std::size_t l = 0; l < nb; ++l) {
      for (std::size_t c = s0; c < n; ++c) {
        vt[l * n + c] = vp[c * kPanel + l];
        wt[l * n + c] = wp[c * kPanel + l];
      }
    }
    for (std::size_t i = s0; i < n; ++i) {
      double* row = a.row(i).data();
      const double* vi = &vp[i * kPanel];
      const double* wi = &wp[i * kPanel];
      const std::size_t len = i + 1 - s0;
      for (std::size_t l = 0; l < nb; ++l) {
        const double* vl = &vt[l * n + s0];
        const double* wl = &wt[l * n + s0];
        const double x = vi[l], z = wi[l];
        double* __restrict out = row + s0;
        for (std::size_t c = 0; c < len; ++c) out[c] -= x * wl[c] + z * vl[c];
      }
    }
  }
  if (n >= 2) {
    d[n - 2] = a(n - 2, n - 2);
    e[n - 2] = a(n - 1, n - 2);
  }
  d[n - 1] = a(n - 1, n - 1);
  e[n - 1] = 0.0;
  return accumulate_reflectors(a, beta).transposed();
}

// Implicit-shift QL on (d, e). Rotations are applied to consecutive rows of
// `zt`, so on return row j of zt is the eigenvector paired with d[j].
void implicit_ql(std::vector<double>& d, std::vector<double>& e, DenseMatrix* zt) {
  const std::size_t n = d.size();
  if (n == 0) return;
  const std::size_t cols = zt ? zt->cols() : 0;
  for (std::size_t l = 0; l < n; ++l) {
    int iterations = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= DBL_EPSILON * dd) break;
      }
      if (m != l) {
        if (++iterations > 200) throw std::runtime_error("implicit QL failed to converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        bool underflow = false;
        for (std::size_t ii = m; ii-- > l;) {
          const std::size_t i = ii;
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          if (zt) {
            double* __restrict lo = zt->row(i).data();
            double* __restrict hi = zt->row(i + 1).data();
            for (std::size_t k = 0; k < cols; ++k) {
              f = hi[k];
              hi[k] = s * lo[k] + c * f;
              lo[k] = c * lo[k] - s * f;
            }
          }
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

// Sorts ascending (stable), then re-orthonormalizes each numerically
// degenerate cluster by modified Gram-Schmidt in index order.
Spectrum finalize(std::vector<double> values, DenseMatrix rows, const EigenOptions& options) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  Spectrum out;
  out.eigenvalues.resize(n);
  out.modes = DenseMatrix(n, rows.cols());
  for (std::size_t j = 0; j < n; ++j) {
    out.eigenvalues[j] = values[order[j]];
    std::copy_n(rows.row(order[j]).data(), rows.cols(), out.modes.row(j).data());
  }

  double scale = 0.0;
  for (double v : out.eigenvalues) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) scale = 1.0;
  const double gap = options.cluster_tolerance * scale;
  const std::size_t dim = out.modes.cols();
  for (std::size_t start = 0; start < n;) {
    std::size_t stop = start + 1;
    while (stop < n && out.eigenvalues[stop] - out.eigenvalues[stop - 1] < gap) ++stop;
    if (stop - start > 1) {
      for (std::size_t j = start; j < stop; ++j) {
        double* vj = out.modes.row(j).data();
        for (std::size_t i = start; i < j; ++i) {
          const double* vi = out.modes.row(i).data();
          axpy(-dot(vi, vj, dim), vi, vj, dim);
        }
        const double norm = std::sqrt(dot(vj, vj, dim));
        for (std::size_t k = 0; k < dim; ++k) vj[k] /= norm;
      }
    }
    start = stop;
  }
  return out;
}

double sparse_residual(const Spectrum& s, const SparseSymmetricOperator& op) {
  const std::size_t n = op.dimension();
  std::vector<double> hv(n);
  double worst = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    op.apply(s.mode(j), hv);
    const double* v = s.mode(j).data();
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double r = hv[k] - s.eigenvalues[j] * v[k];
      acc += r * r;
    }
    worst = std::max(worst, std::sqrt(acc));
  }
  return worst;
}

double dense_residual(const Spectrum& s, const DenseMatrix& m) {
  const std::size_t n = m.rows();
  double worst = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    const double* v = s.mode(j).data();
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = dot(m.row(i).data(), v, n) - s.eigenvalues[j] * v[i];
      acc += r * r;
    }
    worst = std::max(worst, std::sqrt(acc));
  }
  return worst;
}

Spectrum solve_dense(DenseMatrix a, const EigenOptions& options) {
  if (a.rows() != a.cols()) throw std::invalid_argument("eig_symmetric: matrix must be square");
  check_capacity(a.rows(), options);
  if (a.rows() == 0) return {};
  std::vector<double> d, e;
  DenseMatrix zt = householder_tridiagonalize(a, d, e);
  implicit_ql(d, e, &zt);
  return finalize(std::move(d), std::move(zt), options);
}

}  // namespace

Spectrum eig_symmetric(const DenseMatrix& matrix, const EigenOptions& options) {
  check_capacity(matrix.rows(), options);
  Spectrum s = solve_dense(matrix, options);
  s.max_residual = dense_residual(s, matrix);
  return s;
}

Spectrum eig_symmetric(const SparseSymmetricOperator& op, const EigenOptions& options) {
  check_capacity(op.dimension(), options);
  Spectrum s = solve_dense(op.to_dense(), options);
  s.max_residual = sparse_residual(s, op);
  return s;
}

Spectrum eig_symmetric_reflected(const SparseSymmetricOperator& op, std::span<const std::size_t> involution,
                                 const EigenOptions& options) {
  const std::size_t n = op.dimension();
  check_capacity(n, options);
  if (involution.size() != n) throw std::invalid_argument("eig_symmetric_reflected: involution size mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    if (involution[i] >= n || involution[involution[i]] != i) {
      throw std::invalid_argument("eig_symmetric_reflected: permutation is not an involution");
    }
  }
  const auto entries = op.entries();
  auto lookup = [&](std::size_t r, std::size_t c) -> const MatrixEntry* {
    if (r > c) std::swap(r, c);
    auto it = std::lower_bound(entries.begin(), entries.end(), MatrixEntry{r, c, 0.0},
                               [](const MatrixEntry& a, const MatrixEntry& b) {
                                 return a.row != b.row ? a.row < b.row : a.col < b.col;
                               });
    return (it != entries.end() && it->row == r && it->col == c) ? &*it : nullptr;
  };
  for (const auto& e : entries) {
    const MatrixEntry* image = lookup(involution[e.row], involution[e.col]);
    if (!image || image->value != e.value) {
      throw std::invalid_argument("eig_symmetric_reflected: operator does not commute with the involution");
    }
  }

  // Symmetrized / antisymmetrized basis over the orbits {i, P i}.
  constexpr double inv_sqrt2 = 0.70710678118654752440;
  struct Slot {
    std::size_t index = 0;
    double weight = 0.0;
    bool used = false;
  };
  std::vector<Slot> even(n), odd(n);
  std::size_t n_even = 0, n_odd = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = involution[i];
    if (j == i) {
      even[i] = {n_even++, 1.0, true};
    } else if (i < j) {
      even[i] = {n_even, inv_sqrt2, true};
      even[j] = {n_even++, inv_sqrt2, true};
      odd[i] = {n_odd, inv_sqrt2, true};
      odd[j] = {n_odd++, -inv_sqrt2, true};
    }
  }

  auto project = [&](const std::vector<Slot>& slots, std::size_t dim) {
    DenseMatrix block(dim, dim);
    for (const auto& e : entries) {
      const Slot& a = slots[e.row];
      const Slot& b = slots[e.col];
      if (!a.used || !b.used) continue;
      block(a.index, b.index) += a.weight * e.value * b.weight;
      if (e.row != e.col) block(b.index, a.index) += b.weight * e.value * a.weight;
    }
    return block;
  };

  std::vector<double> values;
  values.reserve(n);
  DenseMatrix rows(n, n);
  std::size_t next = 0;
  for (auto* slots : {&even, &odd}) {
    const std::size_t dim = (slots == &even) ? n_even : n_odd;
    if (dim == 0) continue;
    DenseMatrix block = project(*slots, dim);
    std::vector<double> d, e;
    DenseMatrix zt = householder_tridiagonalize(block, d, e);
    implicit_ql(d, e, &zt);
    for (std::size_t j = 0; j < dim; ++j, ++next) {
      values.push_back(d[j]);
      double* full = rows.row(next).data();
      const double* sub = zt.row(j).data();
      for (std::size_t s = 0; s < n; ++s) {
        const Slot& slot = (*slots)[s];
        if (slot.used) full[s] = slot.weight * sub[slot.index];
      }
    }
  }
  Spectrum s = finalize(std::move(values), std::move(rows), options);
  s.max_residual = sparse_residual(s, op);
  return s;
}

Spectrum eig_tridiagonal(const TridiagonalOperator& op, const EigenOptions& options) {
  const std::size_t n = op.diagonal.size();
  check_capacity(n, options);
  std::vector<double> d = op.diagonal;
  std::vector<double> e(n, op.off_diagonal);
  if (n > 0) e[n - 1] = 0.0;
  DenseMatrix zt = DenseMatrix::identity(n);
  implicit_ql(d, e, &zt);
  Spectrum s = finalize(std::move(d), std::move(zt), options);

  double worst = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double* v = s.mode(j).data();
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double hv = op.diagonal[i] * v[i];
      if (i > 0) hv += op.off_diagonal * v[i - 1];
      if (i + 1 < n) hv += op.off_diagonal * v[i + 1];
      const double r = hv - s.eigenvalues[j] * v[i];
      acc += r * r;
    }
    worst = std::max(worst, std::sqrt(acc));
  }
  s.max_residual = worst;
  return s;
}

std::vector<double> tridiagonal_eigenvalues(std::span<const double> diagonal, std::span<const double> off_diagonal) {
  const std::size_t n = diagonal.size();
  if (n > 0 && off_diagonal.size() + 1 < n) {
    throw std::invalid_argument("tridiagonal_eigenvalues: need n-1 off-diagonal entries");
  }
  std::vector<double> d(diagonal.begin(), diagonal.end());
  std::vector<double> e(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) e[i] = off_diagonal[i];
  implicit_ql(d, e, nullptr);
  std::sort(d.begin(), d.end());
  return d;
}

double reconstruction_error(const Spectrum& spectrum, const DenseMatrix& matrix) {
  const std::size_t n = matrix.rows();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < spectrum.size(); ++k) {
        acc += spectrum.modes(k, i) * spectrum.eigenvalues[k] * spectrum.modes(k, j);
      }
      worst = std::max(worst, std::abs(acc - matrix(i, j)));
    }
  }
  return worst;
}

double orthogonality_error(const Spectrum& spectrum) {
  const std::size_t n = spectrum.size();
  const std::size_t dim = spectrum.modes.cols();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double g = dot(spectrum.mode(i).data(), spectrum.mode(j).data(), dim);
      worst = std::max(worst, std::abs(g - (i == j ? 1.0 : 0.0)));
    }
  }
  return worst;
}

}  // namespace z2meson
