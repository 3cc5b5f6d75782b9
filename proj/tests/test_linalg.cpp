#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "mgdm/errors.hpp"
#include "mgdm/linalg.hpp"
#include "mgdm/rng.hpp"
#include "mgdm/tolerances.hpp"
#include "oracles.hpp"

using namespace mgdm;
using linalg::Matrix;
using linalg::Vector;

namespace {

Matrix random_symmetric(std::size_t n, std::uint64_t seed) {
  rng::RandomStream stream(seed);
  Matrix s(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      s(i, j) = stream.next_normal();
      s(j, i) = s(i, j);
    }
  }
  return s;
}

Matrix spiked_covariance(std::size_t p, double kappa) {
  Matrix s(p, p);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) s(i, j) = kappa + (i == j ? 1.0 : 0.0);
  }
  return s;
}

}  // namespace

TEST_CASE("sym_eigen: identity spectrum") {
  const auto spec = linalg::sym_eigen(Matrix::identity(4));
  for (double v : spec.eigenvalues) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("sym_eigen: rank-one spike has eigenvalues kappa p + 1 and ones") {
  const std::size_t p = 50;
  const auto spec = linalg::sym_eigen(spiked_covariance(p, 1.0));
  CHECK(spec.eigenvalues[0] == doctest::Approx(51.0).epsilon(1e-12));
  for (std::size_t j = 1; j < p; ++j) {
    CHECK(std::abs(spec.eigenvalues[j] - 1.0) < 1e-9);
  }
  // Exactly one eigenvalue above 1.
  std::size_t above = 0;
  for (double v : spec.eigenvalues) {
    if (v > 1.0 + 1e-9) ++above;
  }
  CHECK(above == 1);
}

TEST_CASE("sym_eigen: random 3x3 matches characteristic-cubic bisection oracle") {
  const Matrix s = random_symmetric(3, 77);
  auto spec = linalg::sym_eigen(s);
  auto expected = oracles::cubic_eigenvalues(s);
  REQUIRE(expected.size() == 3);
  std::sort(expected.begin(), expected.end(), std::greater<>());
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(std::abs(spec.eigenvalues[i] - expected[i]) < 1e-9);
  }
}

TEST_CASE("sym_eigen: reconstruction and orthonormality contracts") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    const Matrix s = random_symmetric(8, seed);
    const auto spec = linalg::sym_eigen(s);
    const std::size_t n = 8;
    Matrix lam(n, n);
    for (std::size_t i = 0; i < n; ++i) lam(i, i) = spec.eigenvalues[i];
    const Matrix recon = spec.eigenvectors * lam * spec.eigenvectors.transposed();
    CHECK((recon - s).frobenius_norm() <=
          tol::kEigenReconstruct * std::max(1.0, s.frobenius_norm()));
    const Matrix vtv = spec.eigenvectors.transposed() * spec.eigenvectors;
    CHECK((vtv - Matrix::identity(n)).frobenius_norm() <= tol::kEigenOrthonormal);
    CHECK(std::is_sorted(spec.eigenvalues.rbegin(), spec.eigenvalues.rend()));
  }
}

TEST_CASE("sym_eigen: rejects non-square and asymmetric input") {
  CHECK_THROWS_AS(linalg::sym_eigen(Matrix(2, 3)), invalid_input);
  Matrix bad = Matrix::identity(3);
  bad(0, 1) = 0.5;
  CHECK_THROWS_AS(linalg::sym_eigen(bad), invalid_input);
}

TEST_CASE("solve_linear: identity and hand-checked diagonal") {
  const Vector b = {3.0, -1.0, 2.5};
  CHECK(linalg::solve_linear(Matrix::identity(3), b) == b);

  const Matrix a(2, 2, {2.0, 0.0, 0.0, 4.0});
  const Vector x = linalg::solve_linear(a, Vector{2.0, 8.0});
  CHECK(x[0] == doctest::Approx(1.0));
  CHECK(x[1] == doctest::Approx(2.0));
}

TEST_CASE("solve_linear: residual contract on random well-conditioned systems") {
  rng::RandomStream stream(123);
  for (int rep = 0; rep < 5; ++rep) {
    const std::size_t n = 20;
    Matrix a(n, n);
    for (auto& v : a.entries()) v = stream.next_normal();
    for (std::size_t i = 0; i < n; ++i) a(i, i) += 10.0;  // keep it well-conditioned
    Vector b(n);
    for (auto& v : b) v = stream.next_normal();
    const Vector x = linalg::solve_linear(a, b);
    CHECK(norm(a * x - b) <= tol::kSolveResidual * std::max(1.0, norm(b)));
  }
}

TEST_CASE("solve_linear: round trip recovers x to 1e-7 relative") {
  rng::RandomStream stream(321);
  const std::size_t n = 30;
  Matrix a(n, n);
  for (auto& v : a.entries()) v = stream.next_normal();
  for (std::size_t i = 0; i < n; ++i) a(i, i) += 8.0;
  Vector x(n);
  for (auto& v : x) v = stream.next_normal();
  const Vector recovered = linalg::solve_linear(a, a * x);
  CHECK(norm(recovered - x) <= 1e-7 * norm(x));
}

TEST_CASE("solve_linear: singular matrix raises") {
  Matrix a(2, 2, {1.0, 2.0, 2.0, 4.0});
  CHECK_THROWS_AS(linalg::solve_linear(a, Vector{1.0, 1.0}), singular_matrix);
}

TEST_CASE("cholesky: factor reproduces SPD input") {
  const Matrix s = spiked_covariance(12, 0.7);
  const Matrix l = linalg::cholesky(s);
  CHECK((l * l.transposed() - s).frobenius_norm() <= 1e-10 * s.frobenius_norm());
}

TEST_CASE("build_z: displayed entries, orthonormality, orthogonality to ones") {
  CHECK_THROWS_AS(linalg::build_z(1), invalid_input);

  const Matrix z2 = linalg::build_z(2);
  CHECK(z2(0, 0) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(z2(1, 0) == doctest::Approx(-1.0 / std::sqrt(2.0)));

  const Matrix z3 = linalg::build_z(3);
  CHECK(z3(2, 1) == doctest::Approx(-2.0 / std::sqrt(6.0)));

  for (std::size_t m : {2u, 3u, 7u, 10u}) {
    const Matrix z = linalg::build_z(m);
    const Matrix ztz = z.transposed() * z;
    CHECK((ztz - Matrix::identity(m - 1)).frobenius_norm() <= tol::kExactIdentity);
    for (std::size_t j = 0; j + 1 < m; ++j) {
      double col_sum = 0.0;
      for (std::size_t i = 0; i < m; ++i) col_sum += z(i, j);
      CHECK(std::abs(col_sum) <= tol::kExactIdentity);
    }
  }
}

TEST_CASE("build_j: permutation structure and J^M = I") {
  const Matrix j1 = linalg::build_j(1);
  CHECK(j1(0, 0) == 1.0);

  const Matrix j3 = linalg::build_j(3);
  CHECK(j3(0, 1) == 1.0);
  CHECK(j3(1, 2) == 1.0);
  CHECK(j3(2, 0) == 1.0);
  CHECK(j3(0, 0) == 0.0);

  for (std::size_t m : {1u, 3u, 6u}) {
    const Matrix j = linalg::build_j(m);
    CHECK((j * j.transposed() - Matrix::identity(m)).frobenius_norm() == 0.0);
    Matrix power = Matrix::identity(m);
    for (std::size_t k = 0; k < m; ++k) power = power * j;
    CHECK((power - Matrix::identity(m)).frobenius_norm() == 0.0);
  }
}

TEST_CASE("Matrix: constructors reject non-finite entries") {
  CHECK_THROWS_AS(Matrix(1, 2, {1.0, std::nan("")}), invalid_input);
  CHECK_THROWS_AS(Matrix(1, 1, {std::numeric_limits<double>::infinity()}), invalid_input);
  CHECK_THROWS_AS(Matrix(2, 2, {1.0, 2.0, 3.0}), invalid_input);
}

TEST_CASE("kron: matches blockwise definition") {
  const Matrix a(2, 2, {1.0, 2.0, 3.0, 4.0});
  const Matrix b = Matrix::identity(2);
  const Matrix k = linalg::kron(a, b);
  CHECK(k.rows() == 4);
  CHECK(k(0, 0) == 1.0);
  CHECK(k(0, 2) == 2.0);
  CHECK(k(3, 1) == 3.0);
  CHECK(k(2, 2) == 4.0);
}
