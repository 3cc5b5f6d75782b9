#pragma once

// Test-only reference computations, kept independent of the library paths they
// check: characteristic-polynomial root finding for eigenvalues, full-precision
// elimination for small solves, and a dense spectral radius via
// Faddeev-LeVerrier coefficients plus Durand-Kerner roots.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "mgdm/matrix.hpp"

namespace oracles {

using mgdm::linalg::Matrix;
using mgdm::linalg::Vector;

/// Roots of det(S - x I) for symmetric 3x3 S by scanning + bisection of the
/// characteristic cubic. Tolerance drives the bisection width.
inline std::vector<double> cubic_eigenvalues(const Matrix& s, double tolerance = 1e-12) {
  const double a = s(0, 0), b = s(0, 1), c = s(0, 2);
  const double d = s(1, 1), e = s(1, 2), f = s(2, 2);
  // det(S - xI) = -x^3 + tr x^2 - m2 x + det.
  const double tr = a + d + f;
  const double m2 = a * d + a * f + d * f - b * b - c * c - e * e;
  const double det =
      a * (d * f - e * e) - b * (b * f - e * c) + c * (b * e - d * c);
  const auto poly = [&](double x) { return ((-x + tr) * x - m2) * x + det; };

  // All eigenvalues lie within the Gershgorin bound.
  double radius = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < 3; ++j) row += std::abs(s(i, j));
    radius = std::max(radius, row);
  }
  const double lo = -radius - 1.0, hi = radius + 1.0;

  std::vector<double> roots;
  const int grid = 20000;
  double prev_x = lo, prev_v = poly(lo);
  for (int k = 1; k <= grid; ++k) {
    const double x = lo + (hi - lo) * k / grid;
    const double v = poly(x);
    if (prev_v == 0.0) roots.push_back(prev_x);
    if (prev_v * v < 0.0) {
      double xl = prev_x, xr = x;
      double vl = prev_v;
      while (xr - xl > tolerance) {
        const double xm = 0.5 * (xl + xr);
        const double vm = poly(xm);
        if (vl * vm <= 0.0) {
          xr = xm;
        } else {
          xl = xm;
          vl = vm;
        }
      }
      roots.push_back(0.5 * (xl + xr));
    }
    prev_x = x;
    prev_v = v;
  }
  if (poly(hi) == 0.0) roots.push_back(hi);
  return roots;
}

/// Gaussian elimination with partial pivoting in long double.
inline Vector solve_full_precision(const Matrix& a, const Vector& b) {
  const std::size_t n = a.rows();
  std::vector<std::vector<long double>> m(n, std::vector<long double>(n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m[i][j] = a(i, j);
    m[i][n] = b[i];
  }
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs((double)m[i][k]) > std::abs((double)m[pivot][k])) pivot = i;
    }
    std::swap(m[k], m[pivot]);
    if (m[k][k] == 0.0L) throw std::runtime_error("oracle solve: singular");
    for (std::size_t i = k + 1; i < n; ++i) {
      const long double f = m[i][k] / m[k][k];
      for (std::size_t j = k; j <= n; ++j) m[i][j] -= f * m[k][j];
    }
  }
  Vector x(n);
  for (std::size_t i = n; i-- > 0;) {
    long double s = m[i][n];
    for (std::size_t j = i + 1; j < n; ++j) s -= m[i][j] * x[j];
    x[i] = static_cast<double>(s / m[i][i]);
  }
  return x;
}

/// Characteristic polynomial coefficients of a dense matrix via
/// Faddeev-LeVerrier: p(x) = x^n + c[1] x^(n-1) + ... + c[n].
inline std::vector<double> char_poly(const Matrix& a) {
  const std::size_t n = a.rows();
  Matrix m = Matrix(n, n);
  std::vector<double> c(n + 1, 0.0);
  c[0] = 1.0;
  Matrix am(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    if (k == 1) {
      am = a;
    } else {
      // am = a * (previous am + c[k-1] I)
      Matrix shifted = am;
      for (std::size_t i = 0; i < n; ++i) shifted(i, i) += c[k - 1];
      am = a * shifted;
    }
    double trace = 0.0;
    for (std::size_t i = 0; i < n; ++i) trace += am(i, i);
    c[k] = -trace / static_cast<double>(k);
  }
  return c;
}

/// All complex roots of x^n + c[1] x^(n-1) + ... + c[n] by Durand-Kerner.
inline std::vector<std::complex<double>> poly_roots(const std::vector<double>& c) {
  const std::size_t n = c.size() - 1;
  const auto eval = [&](std::complex<double> x) {
    std::complex<double> v = c[0];
    for (std::size_t k = 1; k <= n; ++k) v = v * x + c[k];
    return v;
  };
  std::vector<std::complex<double>> roots(n);
  const std::complex<double> seed(0.4, 0.9);
  std::complex<double> acc(1.0, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    acc *= seed;
    roots[i] = acc;
  }
  for (int iter = 0; iter < 500; ++iter) {
    double moved = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      std::complex<double> denom(1.0, 0.0);
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) denom *= roots[i] - roots[j];
      }
      const std::complex<double> delta = eval(roots[i]) / denom;
      roots[i] -= delta;
      moved = std::max(moved, std::abs(delta));
    }
    if (moved < 1e-13) break;
  }
  return roots;
}

/// Spectral radius of a dense matrix through its characteristic roots.
inline double dense_spectral_radius(const Matrix& a) {
  const auto roots = poly_roots(char_poly(a));
  double rho = 0.0;
  for (const auto& r : roots) rho = std::max(rho, std::abs(r));
  return rho;
}

/// Builds the momentum companion matrix D = [Delta, -gamma I; I, 0] for a
/// covariance with the given spectrum and eigenbasis.
inline Matrix companion_d(const Matrix& sigma_xx, double alpha, double gamma) {
  const std::size_t p = sigma_xx.rows();
  Matrix d(2 * p, 2 * p);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      d(i, j) = (i == j ? 1.0 + gamma : 0.0) - alpha * sigma_xx(i, j);
    }
    d(i, p + i) = -gamma;
    d(p + i, i) = 1.0;
  }
  return d;
}

}  // namespace oracles
