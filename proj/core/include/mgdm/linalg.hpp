#pragma once

#include <cstddef>
#include <vector>

#include "mgdm/matrix.hpp"

namespace mgdm::linalg {

/// Eigendecomposition of a symmetric matrix: eigenvalues sorted descending,
/// eigenvectors as orthonormal columns in matching order.
struct SymSpectrum {
  Vector eigenvalues;
  Matrix eigenvectors;
};

/// Cyclic Jacobi eigensolver for symmetric matrices.
///
/// Throws invalid_input for non-square or materially asymmetric input and
/// numerical_failure if the off-diagonal mass has not dropped below the stop
/// threshold after the sweep cap.
SymSpectrum sym_eigen(const Matrix& s);

/// LU factorization with row partial pivoting. Construction throws
/// singular_matrix when a pivot falls below kSingularPivot * ||A||_F.
class LuFactorization {
 public:
  explicit LuFactorization(Matrix a);

  Vector solve(const Vector& b) const;
  Matrix solve(const Matrix& b) const;
  Matrix inverse() const;
  std::size_t size() const { return lu_.rows(); }

 private:
  Matrix lu_;
  std::vector<std::size_t> perm_;
};

Vector solve_linear(const Matrix& a, const Vector& b);
Matrix solve_linear(const Matrix& a, const Matrix& b);

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
/// Throws numerical_failure on a non-positive pivot.
Matrix cholesky(const Matrix& s);

/// The M x (M-1) orthonormal basis completing 1_M / sqrt(M): column j (1-based)
/// holds 1/sqrt(j(j+1)) in its first j rows and -j/sqrt(j(j+1)) in row j+1.
Matrix build_z(std::size_t m);

/// M x M cyclic shift permutation: ones on the superdiagonal plus the
/// bottom-left corner, so J^M = I.
Matrix build_j(std::size_t m);

}  // namespace mgdm::linalg
