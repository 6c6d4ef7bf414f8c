#pragma once

// Piecewise Hermite interpolation on uniform cells, evaluated as jets so the
// interpolant's own derivatives come out directly.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "lagstab/jet.hpp"

namespace lagstab::detail {

/// Quintic Hermite on [x0, x0 + h] from value, first and second derivative
/// at both ends.
template <int N>
Jet<N> quintic_hermite(double x0, double h, double y, const double a[3], const double b[3]) {
  typename Jet<N>::Coefficients c{};
  c[0] = (y - x0) / h;
  if constexpr (N >= 1) c[1] = 1.0 / h;
  const Jet<N> t = Jet<N>::from_taylor(c);
  const Jet<N> t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
  const Jet<N> h0 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
  const Jet<N> h1 = t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
  const Jet<N> h2 = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5;
  const Jet<N> h3 = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;
  const Jet<N> h4 = -4.0 * t3 + 7.0 * t4 - 3.0 * t5;
  const Jet<N> h5 = 0.5 * t3 - t4 + 0.5 * t5;
  return a[0] * h0 + (a[1] * h) * h1 + (a[2] * h * h) * h2 + b[0] * h3 + (b[1] * h) * h4 + (b[2] * h * h) * h5;
}

/// Cubic Hermite on [x0, x0 + h] from value and first derivative at both ends.
template <int N>
Jet<N> cubic_hermite(double x0, double h, double y, double fa, double da, double fb, double db) {
  typename Jet<N>::Coefficients c{};
  c[0] = (y - x0) / h;
  if constexpr (N >= 1) c[1] = 1.0 / h;
  const Jet<N> t = Jet<N>::from_taylor(c);
  const Jet<N> t2 = t * t, t3 = t2 * t;
  const Jet<N> h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
  const Jet<N> h10 = t3 - 2.0 * t2 + t;
  const Jet<N> h01 = -2.0 * t3 + 3.0 * t2;
  const Jet<N> h11 = t3 - t2;
  return fa * h00 + (da * h) * h10 + fb * h01 + (db * h) * h11;
}

/// Nodes y_k on [lo, hi] with 0 as a node and uniform spacing on each side.
struct SplitGrid {
  double lo = 0, hi = 0;
  int n_left = 0, n_right = 0;  // cells on each side of 0
  double h_left = 0, h_right = 0;

  SplitGrid() = default;
  SplitGrid(double lo_, double hi_, int cells) : lo(lo_), hi(hi_) {
    const double w = hi - lo;
    n_left = lo < 0 ? std::max(1, static_cast<int>(std::lround(cells * (-lo) / w))) : 0;
    n_right = hi > 0 ? std::max(1, static_cast<int>(std::lround(cells * hi / w))) : 0;
    h_left = n_left ? -lo / n_left : 0;
    h_right = n_right ? hi / n_right : 0;
  }

  std::size_t size() const { return static_cast<std::size_t>(n_left + n_right + 1); }
  /// Index of node 0 (y = 0) in node order lo .. hi.
  int zero_index() const { return n_left; }
  double node(int k) const {
    const int j = k - n_left;
    return j < 0 ? j * h_left : j * h_right;
  }
  /// Cell [node(k), node(k+1)] containing y (clamped to the grid).
  int cell(double y) const {
    if (y < 0) {
      int j = static_cast<int>(std::floor(y / h_left));  // negative
      j = std::max(j, -n_left);
      return n_left + j;
    }
    int j = n_right ? static_cast<int>(std::floor(y / h_right)) : 0;
    j = std::min(j, n_right - 1);
    return n_left + std::max(j, 0);
  }
  double cell_width(int k) const { return k < n_left ? h_left : h_right; }
};

}  // namespace lagstab::detail
