#include "mgdm/matrix.hpp"

#include <cmath>
#include <utility>

#include "mgdm/errors.hpp"

namespace mgdm::linalg {

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, 0.0) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows_ * cols_) {
    throw invalid_input("Matrix: entry count does not match rows x cols");
  }
  if (!all_finite()) {
    throw invalid_input("Matrix: non-finite entry");
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

double Matrix::frobenius_norm() const { return norm(entries_); }

double Matrix::max_abs() const {
  double m = 0.0;
  for (double v : entries_) m = std::max(m, std::abs(v));
  return m;
}

bool Matrix::all_finite() const {
  for (double v : entries_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

void Matrix::set_block(std::size_t i, std::size_t j, const Matrix& block) {
  if (i + block.rows() > rows_ || j + block.cols() > cols_) {
    throw invalid_input("Matrix::set_block: block out of range");
  }
  for (std::size_t r = 0; r < block.rows(); ++r) {
    for (std::size_t c = 0; c < block.cols(); ++c) (*this)(i + r, j + c) = block(r, c);
  }
}

void Matrix::add_block(std::size_t i, std::size_t j, const Matrix& block) {
  if (i + block.rows() > rows_ || j + block.cols() > cols_) {
    throw invalid_input("Matrix::add_block: block out of range");
  }
  for (std::size_t r = 0; r < block.rows(); ++r) {
    for (std::size_t c = 0; c < block.cols(); ++c) (*this)(i + r, j + c) += block(r, c);
  }
}

Matrix Matrix::block(std::size_t i, std::size_t j, std::size_t rows, std::size_t cols) const {
  if (i + rows > rows_ || j + cols > cols_) {
    throw invalid_input("Matrix::block: range out of bounds");
  }
  Matrix out(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) out(r, c) = (*this)(i + r, j + c);
  }
  return out;
}

namespace {
void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw invalid_input(std::string(what) + ": shape mismatch");
  }
}
}  // namespace

Matrix operator+(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "Matrix+");
  Matrix out = a;
  for (std::size_t k = 0; k < out.entries().size(); ++k) out.entries()[k] += b.entries()[k];
  return out;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "Matrix-");
  Matrix out = a;
  for (std::size_t k = 0; k < out.entries().size(); ++k) out.entries()[k] -= b.entries()[k];
  return out;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw invalid_input("Matrix*: inner dimension mismatch");
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

Matrix operator*(double s, const Matrix& a) {
  Matrix out = a;
  for (double& v : out.entries()) v *= s;
  return out;
}

Vector operator*(const Matrix& a, const Vector& x) {
  if (a.cols() != x.size()) throw invalid_input("Matrix*vector: dimension mismatch");
  Vector out(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    out[i] = dot(a.row(i), x);
  }
  return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm_squared(std::span<const double> v) { return dot(v, v); }

double norm(std::span<const double> v) { return std::sqrt(norm_squared(v)); }

Vector operator+(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw invalid_input("vector+: length mismatch");
  Vector out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
  return out;
}

Vector operator-(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw invalid_input("vector-: length mismatch");
  Vector out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b[i];
  return out;
}

Vector operator*(double s, const Vector& a) {
  Vector out = a;
  for (double& v : out) v *= s;
  return out;
}

bool is_symmetric(const Matrix& s, double rel_tol) {
  if (s.rows() != s.cols()) return false;
  double asym = 0.0;
  for (std::size_t i = 0; i < s.rows(); ++i) {
    for (std::size_t j = i + 1; j < s.cols(); ++j) {
      const double d = s(i, j) - s(j, i);
      asym += 2.0 * d * d;
    }
  }
  const double scale = std::max(1.0, s.frobenius_norm());
  return std::sqrt(asym) <= rel_tol * scale;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const double aij = a(i, j);
      if (aij == 0.0) continue;
      for (std::size_t r = 0; r < b.rows(); ++r) {
        for (std::size_t c = 0; c < b.cols(); ++c) {
          out(i * b.rows() + r, j * b.cols() + c) = aij * b(r, c);
        }
      }
    }
  }
  return out;
}

}  // namespace mgdm::linalg
