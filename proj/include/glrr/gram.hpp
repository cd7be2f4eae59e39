#pragma once

#include <cstddef>
#include <vector>

#include "glrr/manifold.hpp"

namespace glrr {

/// Slice i holds B^i_{jk} = <Log_{X_i}(X_j), Log_{X_i}(X_k)>.
struct GramTensor {
  std::vector<Matrix> slices;

  std::size_t n_points() const noexcept { return slices.size(); }
  const Matrix& operator[](std::size_t i) const { return slices[i]; }

  /// Throws Shape unless there are N slices, each N x N.
  void check_shape() const;
};

/// Builds all slices, parallel over base points. Output is independent of the
/// thread count. A cut-locus pair raises LogUndefinedPair(i, j) for the
/// smallest offending (i, j) in row-major order.
GramTensor build_gram(const std::vector<GrassmannPoint>& points);

/// max_i ||B_i||_2^2 + N + 1 with the spectral norm.
double eta_b(const GramTensor& b);

namespace serial {

/// Reference implementation: one log_map per (i, j) and one `inner` per
/// (i, j, k), no batching or threading.
GramTensor build_gram(const std::vector<GrassmannPoint>& points);

}  // namespace serial

}  // namespace glrr
