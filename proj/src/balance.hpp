#pragma once

#include <cmath>

#include <Eigen/Dense>

namespace metachain::detail {

/// Parlett-Reinsch balancing: a diagonal similarity (powers of two) that
/// evens out row and column norms before the QR iteration.
template <typename Matrix>
void balance(Matrix& a) {
  using std::abs;
  using Scalar = typename Matrix::Scalar;
  const Eigen::Index n = a.rows();
  const Scalar radix(2);
  const Scalar sqrdx = radix * radix;
  bool done = false;
  while (!done) {
    done = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      Scalar r(0);
      Scalar c(0);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        c += abs(a(j, i));
        r += abs(a(i, j));
      }
      if (c == Scalar(0) || r == Scalar(0)) continue;
      Scalar g = r / radix;
      Scalar f(1);
      const Scalar s = c + r;
      while (c < g) {
        f *= radix;
        c *= sqrdx;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= sqrdx;
      }
      if ((c + r) / f < Scalar(0.95) * s) {
        done = false;
        const Scalar inv = Scalar(1) / f;
        a.row(i) *= inv;
        a.col(i) *= f;
      }
    }
  }
}

}  // namespace metachain::detail
