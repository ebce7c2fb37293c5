#include "z2meson/dense.hpp"

namespace z2meson {

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::transposed() const {
  DenseMatrix t(cols_, rows_);
  constexpr std::size_t tile = 64;
  for (std::size_t i0 = 0; i0 < rows_; i0 += tile) {
    for (std::size_t j0 = 0; j0 < cols_; j0 += tile) {
      const std::size_t i1 = std::min(rows_, i0 + tile);
      const std::size_t j1 = std::min(cols_, j0 + tile);
      for (std::size_t i = i0; i < i1; ++i)
        for (std::size_t j = j0; j < j1; ++j) t(j, i) = (*this)(i, j);
    }
  }
  return t;
}

}  // namespace z2meson
