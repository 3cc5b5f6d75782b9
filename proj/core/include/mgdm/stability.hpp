#pragma once

#include <cstdint>
#include <vector>

#include "mgdm/dataset.hpp"
#include "mgdm/matrix.hpp"

namespace mgdm::stability {

using data::BatchMoments;
using data::DataSet;
using linalg::Matrix;
using linalg::Vector;

/// The q x q (q = Mp) linear system whose solution is the epoch fixed point:
/// Omega theta* = alpha Sxy*, with Omega = A + alpha B. Block row m carries the
/// identity on the diagonal, -Delta^(m) = alpha Sxx^(m) - (1+gamma) I at column
/// m-1 (mod M) and gamma I at column m-2 (mod M); for M <= 2 the wrapped bands
/// land on shared blocks and are summed.
struct OmegaSystem {
  std::size_t batch_count = 0;  // M
  std::size_t dim = 0;          // p
  double alpha = 0.0;
  double gamma = 0.0;
  Matrix omega;                 // q x q
  Matrix a_mat;                 // q x q, alpha-free part
  Matrix b_mat;                 // q x q, moment part
  Vector sxy_star;              // stacked Sxy^(m)
  std::vector<BatchMoments> moments;

  std::size_t order() const { return batch_count * dim; }
};

struct StableSolution {
  Vector theta_star;                 // length q
  std::vector<Vector> per_batch;     // M blocks of length p
  double residual = 0.0;             // ||Omega theta* - alpha Sxy*||
};

/// Closed-form d_gamma data: the circulant generator a of Q with 1^T a = 0 and
/// d_gamma = ||a||, the l2 norm of the first row of P2 (A22^P)^-1 P2^T.
struct DGamma {
  std::size_t batch_count = 0;
  double gamma = 0.0;
  Vector a_vec;
  double value = 0.0;
};

/// Assembles Omega, A and B from batch moments. gamma = 1 is rejected here
/// (the system is structurally singular there); alpha = 0 and the other
/// excluded points surface later as singular_matrix from the solver.
OmegaSystem assemble_omega(const std::vector<BatchMoments>& moments, double alpha,
                           double gamma);

/// Direct solve theta* = alpha Omega^-1 Sxy* with residual check.
StableSolution solve_stable(const OmegaSystem& sys);

/// First-order coefficient of the stable solution's deviation from the stacked
/// OLS estimator:
///   E = (P1 Sxx^-1 P1^T B - I_q) { P2 (A22^P)^-1 P2^T } (B theta_ols* - Sxy*)
/// evaluated blockwise through H2 = Q (x) I_p.
Vector bias_term(const OmegaSystem& sys, const Vector& theta_ols);

/// d_gamma by the explicit circulant formulas (separate gamma = 0 and
/// gamma > 0 branches).
DGamma d_gamma_closed(std::size_t batch_count, double gamma);

/// d_gamma by dense construction: Q = Z (Z^T Atilde Z)^-1 Z^T and the norm of
/// its first row. Serves as the independent oracle for d_gamma_closed.
double d_gamma_dense(std::size_t batch_count, double gamma);

/// The dense generalized inverse Q itself (exposed for tests and bias_term).
Matrix dense_q_matrix(std::size_t batch_count, double gamma);

/// Asymptotic covariance of the stable solution,
/// sigma^2 (Sigma_xx^-1 + alpha^2 M d_gamma^2 Sigma_xx), the O(alpha^4)
/// remainder omitted.
Matrix asymptotic_variance(double alpha, double gamma, std::size_t batch_count,
                           double sigma, const Matrix& sigma_xx);

struct ShuffleScan {
  std::vector<double> norms;  // ||E^(k)|| per shuffled partition, k = 0..K-1
  double max_norm = 0.0;
};

/// ||E^(k)|| across K seeded shuffled partitions into `batch_count` batches.
/// Partition k is derived as derive_seed(seed, k), matching epoch k of a
/// shuffled BatchPlan built from the same seed.
ShuffleScan shuffle_error_scan(const DataSet& ds, std::size_t batch_count,
                               std::size_t num_partitions, double alpha, double gamma,
                               std::uint64_t seed);

namespace detail {
// Both gamma > 0 evaluation routes for the circulant generator a; the
// telescoped route stays finite where gamma^-M overflows.
Vector d_gamma_literal(std::size_t batch_count, double gamma);
Vector d_gamma_telescoped(std::size_t batch_count, double gamma);
}  // namespace detail

}  // namespace mgdm::stability
