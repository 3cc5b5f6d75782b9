#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mgdm::linalg {

/// Dense row-major matrix of doubles. Public constructors reject non-finite
/// entries; dimensions are fixed after construction.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols);  // zero-initialized
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return entries_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const {
    return {entries_.data() + i * cols_, cols_};
  }
  std::span<double> row(std::size_t i) { return {entries_.data() + i * cols_, cols_}; }

  const std::vector<double>& entries() const { return entries_; }
  std::vector<double>& entries() { return entries_; }

  Matrix transposed() const;
  double frobenius_norm() const;
  double max_abs() const;
  bool all_finite() const;

  /// Writes `block` with its top-left corner at (i, j); the block must fit.
  void set_block(std::size_t i, std::size_t j, const Matrix& block);
  /// Adds `block` entrywise at (i, j); the block must fit.
  void add_block(std::size_t i, std::size_t j, const Matrix& block);
  Matrix block(std::size_t i, std::size_t j, std::size_t rows, std::size_t cols) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> entries_;
};

Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& a);

using Vector = std::vector<double>;

Vector operator*(const Matrix& a, const Vector& x);

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> v);
double norm_squared(std::span<const double> v);
Vector operator+(const Vector& a, const Vector& b);
Vector operator-(const Vector& a, const Vector& b);
Vector operator*(double s, const Vector& a);

/// Symmetry check: ||S - S^T||_F <= rel_tol * max(1, ||S||_F).
bool is_symmetric(const Matrix& s, double rel_tol);

/// Kronecker product a (x) b.
Matrix kron(const Matrix& a, const Matrix& b);

}  // namespace mgdm::linalg

namespace mgdm {
// Vector/Matrix arithmetic is usable unqualified from every mgdm:: module.
using linalg::operator+;
using linalg::operator-;
using linalg::operator*;
using linalg::dot;
using linalg::norm;
using linalg::norm_squared;
}  // namespace mgdm
