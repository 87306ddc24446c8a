#pragma once

#include <cmath>
#include <vector>

#include "skf/errors.hpp"
#include "skf/jet.hpp"

// Dense helpers for the tiny (dim <= 8) matrices that appear in metric and
// Jacobian work. Templated over the scalar so the same code runs on plain
// doubles and on jets.

namespace skf {

template <class T>
using Matrix = std::vector<std::vector<T>>;

inline double scalar_value(double x) { return x; }
inline double scalar_value(const Jet2& x) { return x.value(); }

template <class T>
Matrix<T> make_matrix(int n, const T& fill = T{}) {
  return Matrix<T>(n, std::vector<T>(n, fill));
}

// Gauss-Jordan inverse with partial pivoting on the scalar's value part.
template <class T>
Matrix<T> gauss_jordan_inverse(Matrix<T> a) {
  const int n = static_cast<int>(a.size());
  Matrix<T> inv = make_matrix<T>(n);
  for (int i = 0; i < n; ++i) inv[i][i] = T(1.0);
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(scalar_value(a[r][col])) >
          std::abs(scalar_value(a[piv][col])))
        piv = r;
    if (scalar_value(a[piv][col]) == 0.0)
      throw ChartError("singular matrix");
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    const T d = a[col][col];
    for (int j = 0; j < n; ++j) {
      a[col][j] = a[col][j] / d;
      inv[col][j] = inv[col][j] / d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const T f = a[r][col];
      if (scalar_value(f) == 0.0) continue;
      for (int j = 0; j < n; ++j) {
        a[r][j] = a[r][j] - f * a[col][j];
        inv[r][j] = inv[r][j] - f * inv[col][j];
      }
    }
  }
  return inv;
}

// Laplace expansion along the first row; exact and branch-free for the
// minor sizes (<= 5) this library meets.
template <class T>
T laplace_det(const Matrix<T>& a) {
  const int n = static_cast<int>(a.size());
  if (n == 0) return T(1.0);
  if (n == 1) return a[0][0];
  if (n == 2) return a[0][0] * a[1][1] - a[0][1] * a[1][0];
  T det = T(0.0);
  for (int j = 0; j < n; ++j) {
    Matrix<T> sub(n - 1, std::vector<T>(n - 1));
    for (int r = 1; r < n; ++r) {
      int cc = 0;
      for (int c = 0; c < n; ++c) {
        if (c == j) continue;
        sub[r - 1][cc++] = a[r][c];
      }
    }
    const T term = a[0][j] * laplace_det(sub);
    det = (j % 2 == 0) ? det + term : det - term;
  }
  return det;
}

// Cholesky factor L (lower triangular, g = L L^T). Throws if g is not
// positive definite; this doubles as the SPD check for metrics.
inline Matrix<double> cholesky_lower(const Matrix<double>& g) {
  const int n = static_cast<int>(g.size());
  Matrix<double> L = make_matrix<double>(n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = g[i][j];
      for (int k = 0; k < j; ++k) s -= L[i][k] * L[j][k];
      if (i == j) {
        if (s <= 0.0) throw ChartError("matrix is not positive definite");
        L[i][i] = std::sqrt(s);
      } else {
        L[i][j] = s / L[j][j];
      }
    }
  }
  return L;
}

// Inverse of a lower-triangular matrix by forward substitution.
inline Matrix<double> lower_inverse(const Matrix<double>& L) {
  const int n = static_cast<int>(L.size());
  Matrix<double> inv = make_matrix<double>(n, 0.0);
  for (int i = 0; i < n; ++i) {
    inv[i][i] = 1.0 / L[i][i];
    for (int j = 0; j < i; ++j) {
      double s = 0.0;
      for (int k = j; k < i; ++k) s += L[i][k] * inv[k][j];
      inv[i][j] = -s / L[i][i];
    }
  }
  return inv;
}

}  // namespace skf
