#include "mgdm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mgdm/errors.hpp"
#include "mgdm/tolerances.hpp"

namespace mgdm::linalg {

namespace {

double offdiag_frobenius(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = i + 1; j < a.cols(); ++j) {
      s += 2.0 * a(i, j) * a(i, j);
    }
  }
  return std::sqrt(s);
}

}  // namespace

SymSpectrum sym_eigen(const Matrix& s) {
  if (s.rows() != s.cols()) throw invalid_input("sym_eigen: matrix not square");
  if (!is_symmetric(s, tol::kSymmetryRel)) {
    throw invalid_input("sym_eigen: matrix materially asymmetric");
  }
  const std::size_t n = s.rows();
  Matrix a = s;
  // Work on the symmetrized copy so rotations keep exact symmetry.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = 0.5 * (a(i, j) + a(j, i));
      a(i, j) = v;
      a(j, i) = v;
    }
  }
  Matrix v = Matrix::identity(n);
  const double stop = tol::kEigenOffdiagStop * std::max(1.0, a.frobenius_norm());

  bool converged = n < 2 || offdiag_frobenius(a) <= stop;
  for (int sweep = 0; sweep < tol::kEigenMaxSweeps && !converged; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double app = a(p, p);
        const double aqq = a(q, q);
        // Stable rotation: t = sign(theta) / (|theta| + sqrt(theta^2 + 1)).
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        const double tau = sn / (1.0 + c);

        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          if (i == p || i == q) continue;
          const double aip = a(i, p);
          const double aiq = a(i, q);
          a(i, p) = aip - sn * (aiq + tau * aip);
          a(p, i) = a(i, p);
          a(i, q) = aiq + sn * (aip - tau * aiq);
          a(q, i) = a(i, q);
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double vip = v(i, p);
          const double viq = v(i, q);
          v(i, p) = vip - sn * (viq + tau * vip);
          v(i, q) = viq + sn * (vip - tau * viq);
        }
      }
    }
    converged = offdiag_frobenius(a) <= stop;
  }
  if (!converged) throw numerical_failure("sym_eigen: Jacobi sweeps did not converge");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

  SymSpectrum out;
  out.eigenvalues.resize(n);
  out.eigenvectors = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, order[k]);
  }
  return out;
}

LuFactorization::LuFactorization(Matrix a) : lu_(std::move(a)) {
  if (lu_.rows() != lu_.cols()) throw invalid_input("LuFactorization: matrix not square");
  const std::size_t n = lu_.rows();
  const double pivot_floor = tol::kSingularPivot * lu_.frobenius_norm();
  perm_.resize(n);
  std::iota(perm_.begin(), perm_.end(), 0);

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    double best = std::abs(lu_(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::abs(lu_(i, k));
      if (v > best) {
        best = v;
        pivot = i;
      }
    }
    if (!(best > pivot_floor)) {
      throw singular_matrix("LuFactorization: pivot below singularity threshold");
    }
    if (pivot != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(pivot, j));
      std::swap(perm_[k], perm_[pivot]);
    }
    const double akk = lu_(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = lu_(i, k) / akk;
      lu_(i, k) = f;
      if (f == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= f * lu_(k, j);
    }
  }
}

Vector LuFactorization::solve(const Vector& b) const {
  const std::size_t n = lu_.rows();
  if (b.size() != n) throw invalid_input("LuFactorization::solve: length mismatch");
  Vector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[perm_[i]];
  for (std::size_t i = 1; i < n; ++i) {
    double s = x[i];
    for (std::size_t k = 0; k < i; ++k) s -= lu_(i, k) * x[k];
    x[i] = s;
  }
  for (std::size_t ii = n; ii-- > 0;) {
    double s = x[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= lu_(ii, k) * x[k];
    x[ii] = s / lu_(ii, ii);
  }
  return x;
}

Matrix LuFactorization::solve(const Matrix& b) const {
  const std::size_t n = lu_.rows();
  if (b.rows() != n) throw invalid_input("LuFactorization::solve: row mismatch");
  Matrix x(n, b.cols());
  Vector col(n);
  for (std::size_t j = 0; j < b.cols(); ++j) {
    for (std::size_t i = 0; i < n; ++i) col[i] = b(i, j);
    const Vector sol = solve(col);
    for (std::size_t i = 0; i < n; ++i) x(i, j) = sol[i];
  }
  return x;
}

Matrix LuFactorization::inverse() const { return solve(Matrix::identity(lu_.rows())); }

Vector solve_linear(const Matrix& a, const Vector& b) {
  return LuFactorization(a).solve(b);
}

Matrix solve_linear(const Matrix& a, const Matrix& b) {
  return LuFactorization(a).solve(b);
}

Matrix cholesky(const Matrix& s) {
  if (s.rows() != s.cols()) throw invalid_input("cholesky: matrix not square");
  const std::size_t n = s.rows();
  Matrix l(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double sum = s(i, j);
      for (std::size_t k = 0; k < j; ++k) sum -= l(i, k) * l(j, k);
      if (i == j) {
        if (!(sum > 0.0)) throw numerical_failure("cholesky: non-positive pivot");
        l(i, i) = std::sqrt(sum);
      } else {
        l(i, j) = sum / l(j, j);
      }
    }
  }
  return l;
}

Matrix build_z(std::size_t m) {
  if (m < 2) throw invalid_input("build_z: need at least two batches");
  Matrix z(m, m - 1);
  for (std::size_t j = 1; j < m; ++j) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(j) * (j + 1));
    for (std::size_t i = 0; i < j; ++i) z(i, j - 1) = scale;
    z(j, j - 1) = -static_cast<double>(j) * scale;
  }
  return z;
}

Matrix build_j(std::size_t m) {
  if (m < 1) throw invalid_input("build_j: need at least one batch");
  Matrix j(m, m);
  for (std::size_t i = 0; i + 1 < m; ++i) j(i, i + 1) = 1.0;
  j(m - 1, 0) = 1.0;
  return j;
}

}  // namespace mgdm::linalg
