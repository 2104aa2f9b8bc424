#pragma once

// Scalar protocol shared by double, Jet and GridField:
//   value_of(x)   value at the base point (double, Jet)
//   like(ref, c)  constant c in the same space as ref
//   is_zero(x)    exact structural zero
//   add_mul(o,a,b) o += a*b

#include <cmath>
#include <vector>

#include "polyharm/errors.hpp"

namespace polyharm {

inline double value_of(double x) { return x; }
inline double like(double, double v) { return v; }
inline bool is_zero(double x) { return x == 0.0; }
inline void add_mul(double& out, double a, double b) { out += a * b; }
inline double inv(double x) { return 1.0 / x; }
inline double sexp(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }
// Derivative of sexp.
inline double sexp_d(double x) { return x > 0.0 ? std::exp(-1.0 / x) / (x * x) : 0.0; }
inline double sign_of(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// Inverse of a small symmetric positive definite matrix (row-major, n x n).
// Gauss-Jordan without pivoting, which is stable for SPD input and works for
// any scalar type with field operations.
template <class T>
std::vector<T> inverse_spd(const std::vector<T>& A, int n) {
  std::vector<T> a = A;
  std::vector<T> r(static_cast<std::size_t>(n) * n, like(A[0], 0.0));
  for (int i = 0; i < n; ++i) r[i * n + i] = like(A[0], 1.0);
  for (int c = 0; c < n; ++c) {
    T p = inv(a[c * n + c]);
    for (int j = 0; j < n; ++j) {
      a[c * n + j] = a[c * n + j] * p;
      r[c * n + j] = r[c * n + j] * p;
    }
    for (int i = 0; i < n; ++i) {
      if (i == c) continue;
      T f = a[i * n + c];
      if (is_zero(f)) continue;
      for (int j = 0; j < n; ++j) {
        a[i * n + j] = a[i * n + j] - f * a[c * n + j];
        r[i * n + j] = r[i * n + j] - f * r[c * n + j];
      }
    }
  }
  return r;
}

}  // namespace polyharm
