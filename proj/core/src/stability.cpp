#include "mgdm/stability.hpp"

#include <cmath>
#include <numeric>

#include "mgdm/errors.hpp"
#include "mgdm/linalg.hpp"
#include "mgdm/optimizer.hpp"
#include "mgdm/parallel.hpp"
#include "mgdm/rng.hpp"
#include "mgdm/tolerances.hpp"

namespace mgdm::stability {

using linalg::LuFactorization;

namespace {

/// Kahan-compensated accumulator for the d_gamma sums, whose terms span many
/// orders of magnitude at small gamma.
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

void check_gamma(double gamma, const char* where) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw invalid_input(std::string(where) + ": gamma must be finite and nonnegative");
  }
  if (gamma == 1.0) {
    throw invalid_input(std::string(where) + ": gamma = 1 is excluded (system singular)");
  }
}

/// The M x M circulant carrying the alpha-free structure of A at p = 1:
/// 1 on the diagonal, -(1+gamma) one step below (cyclically), gamma two steps
/// below. Wrapped bands that land on a shared cell are summed (M <= 2).
Matrix a_tilde(std::size_t m, double gamma) {
  Matrix a(m, m);
  for (std::size_t r = 0; r < m; ++r) {
    a(r, r) += 1.0;
    a(r, (r + m - 1) % m) += -(1.0 + gamma);
    a(r, (r + m - 2) % m) += gamma;
  }
  return a;
}

}  // namespace

OmegaSystem assemble_omega(const std::vector<BatchMoments>& moments, double alpha,
                           double gamma) {
  if (moments.empty()) throw invalid_input("assemble_omega: no batch moments");
  check_gamma(gamma, "assemble_omega");
  if (!std::isfinite(alpha)) throw invalid_input("assemble_omega: alpha must be finite");

  const std::size_t m_count = moments.size();
  const std::size_t p = moments[0].sxx.rows();
  for (const auto& bm : moments) {
    if (bm.sxx.rows() != p || bm.sxx.cols() != p || bm.sxy.size() != p) {
      throw invalid_input("assemble_omega: batch moments disagree on dimension");
    }
  }

  OmegaSystem sys;
  sys.batch_count = m_count;
  sys.dim = p;
  sys.alpha = alpha;
  sys.gamma = gamma;
  sys.moments = moments;

  const std::size_t q = m_count * p;
  sys.a_mat = Matrix(q, q);
  sys.b_mat = Matrix(q, q);
  sys.sxy_star.resize(q);

  const Matrix eye = Matrix::identity(p);
  const Matrix neg_one_plus_gamma = -(1.0 + gamma) * eye;
  const Matrix gamma_eye = gamma * eye;
  for (std::size_t m = 0; m < m_count; ++m) {
    const std::size_t lag1 = (m + m_count - 1) % m_count;
    const std::size_t lag2 = (m + m_count - 2) % m_count;
    sys.a_mat.add_block(m * p, m * p, eye);
    sys.a_mat.add_block(m * p, lag1 * p, neg_one_plus_gamma);
    sys.a_mat.add_block(m * p, lag2 * p, gamma_eye);
    sys.b_mat.add_block(m * p, lag1 * p, moments[m].sxx);
    for (std::size_t i = 0; i < p; ++i) sys.sxy_star[m * p + i] = moments[m].sxy[i];
  }

  sys.omega = sys.a_mat;
  for (std::size_t k = 0; k < sys.omega.entries().size(); ++k) {
    sys.omega.entries()[k] += alpha * sys.b_mat.entries()[k];
  }
  return sys;
}

StableSolution solve_stable(const OmegaSystem& sys) {
  const std::size_t q = sys.order();
  Vector rhs(q);
  for (std::size_t i = 0; i < q; ++i) rhs[i] = sys.alpha * sys.sxy_star[i];

  StableSolution sol;
  sol.theta_star = LuFactorization(sys.omega).solve(rhs);

  const Vector back = sys.omega * sol.theta_star;
  sol.residual = linalg::norm(back - rhs);
  const double bound = tol::kStableResidual * std::max(1.0, linalg::norm(rhs));
  if (!(sol.residual <= bound)) {
    throw numerical_failure("solve_stable: residual above contract bound");
  }

  sol.per_batch.resize(sys.batch_count);
  for (std::size_t m = 0; m < sys.batch_count; ++m) {
    sol.per_batch[m].assign(sol.theta_star.begin() + static_cast<std::ptrdiff_t>(m * sys.dim),
                            sol.theta_star.begin() + static_cast<std::ptrdiff_t>((m + 1) * sys.dim));
  }
  return sol;
}

Matrix dense_q_matrix(std::size_t batch_count, double gamma) {
  if (batch_count < 2) throw invalid_input("dense_q_matrix: need at least two batches");
  check_gamma(gamma, "dense_q_matrix");
  const Matrix z = linalg::build_z(batch_count);
  const Matrix at = a_tilde(batch_count, gamma);
  const Matrix k = z.transposed() * at * z;
  const Matrix k_inv = LuFactorization(k).inverse();
  return z * k_inv * z.transposed();
}

double d_gamma_dense(std::size_t batch_count, double gamma) {
  const Matrix q = dense_q_matrix(batch_count, gamma);
  return linalg::norm(q.row(0));
}

namespace detail {

Vector d_gamma_literal(std::size_t m_count, double gamma) {
  const std::size_t m = m_count;
  // S_k = sum_{j=1..k} gamma^-j via the exact recurrence S_k = (1 + S_{k-1})/gamma.
  Vector s(m + 1, 0.0);
  for (std::size_t k = 1; k <= m; ++k) s[k] = (1.0 + s[k - 1]) / gamma;

  KahanSum sum1;  // sum_{k=1}^{M-1} S_k
  KahanSum sum2;  // sum_{k=1}^{M-2} S_k
  KahanSum dbl;   // sum_{m=2}^{M-1} sum_{k=1}^{m-1} S_k = sum_k (M-1-k) S_k
  for (std::size_t k = 1; k + 1 <= m - 1; ++k) sum2.add(s[k]);
  for (std::size_t k = 1; k <= m - 1; ++k) {
    sum1.add(s[k]);
    if (k <= m - 2) dbl.add(static_cast<double>(m - 1 - k) * s[k]);
  }

  const double md = static_cast<double>(m);
  const double beta = (md * s[m - 1] - sum1.sum) / (md * gamma * s[m]);

  Vector a(m, 0.0);
  a[0] = beta * gamma * sum1.sum / md + dbl.sum / (md * md) - sum2.sum / md;
  if (m >= 2) a[1] = a[0] - beta;
  KahanSum prefix;  // sum_{k=1}^{m-1} S_k, grown incrementally
  prefix.add(s[1]);
  for (std::size_t i = 2; i < m; ++i) {
    a[i] = a[0] - beta * gamma * s[i] - prefix.sum / md + s[i - 1];
    prefix.add(s[i]);
  }
  return a;
}

Vector d_gamma_telescoped(std::size_t m_count, double gamma) {
  const std::size_t m = m_count;
  const double md = static_cast<double>(m);
  // Differences g_k = a_k - a_{k+1} admit the closed form
  //   g_0 = beta,  g_k = gamma^(M-k)/(1-gamma^M) - 1/(M(1-gamma))
  // which stays bounded for every gamma != 1.
  const double inv_m1g = 1.0 / (md * (1.0 - gamma));
  double w;  // gamma^M / (1 - gamma^M)
  if (gamma < 1.0) {
    const double gm = std::pow(gamma, static_cast<double>(m));
    w = gm / (1.0 - gm);
  } else {
    const double gm_inv = std::pow(gamma, -static_cast<double>(m));
    w = -1.0 / (1.0 - gm_inv);
  }

  Vector g(m, 0.0);
  g[0] = 1.0 - inv_m1g + w;
  for (std::size_t k = 1; k < m; ++k) {
    const double scaled = gamma < 1.0
                              ? std::pow(gamma, static_cast<double>(m - k)) /
                                    (1.0 - std::pow(gamma, static_cast<double>(m)))
                              : w * std::pow(gamma, -static_cast<double>(k));
    g[k] = scaled - inv_m1g;
  }

  Vector a(m, 0.0);
  KahanSum weighted;
  for (std::size_t k = 0; k + 1 <= m - 1; ++k) {
    weighted.add(static_cast<double>(m - 1 - k) * g[k]);
  }
  a[0] = weighted.sum / md;
  for (std::size_t i = 1; i < m; ++i) a[i] = a[i - 1] - g[i - 1];
  return a;
}

}  // namespace detail

DGamma d_gamma_closed(std::size_t batch_count, double gamma) {
  if (batch_count < 2) throw invalid_input("d_gamma_closed: need at least two batches");
  check_gamma(gamma, "d_gamma_closed");

  DGamma out;
  out.batch_count = batch_count;
  out.gamma = gamma;
  if (gamma == 0.0) {
    const double md = static_cast<double>(batch_count);
    out.a_vec.resize(batch_count);
    out.a_vec[0] = (md - 1.0) / (2.0 * md);
    for (std::size_t i = 1; i < batch_count; ++i) {
      out.a_vec[i] = (2.0 * static_cast<double>(i) - md - 1.0) / (2.0 * md);
    }
  } else {
    const bool literal_ok =
        gamma > 1.0 || -static_cast<double>(batch_count - 1) * std::log(gamma) <=
                           std::log(tol::kDGammaLiteralCancelCap);
    out.a_vec = literal_ok ? detail::d_gamma_literal(batch_count, gamma)
                           : detail::d_gamma_telescoped(batch_count, gamma);
  }
  out.value = linalg::norm(out.a_vec);
  return out;
}

Vector bias_term(const OmegaSystem& sys, const Vector& theta_ols) {
  const std::size_t m_count = sys.batch_count;
  const std::size_t p = sys.dim;
  if (m_count < 2) throw invalid_input("bias_term: need at least two batches");
  if (theta_ols.size() != p) throw invalid_input("bias_term: theta_ols has wrong length");
  check_gamma(sys.gamma, "bias_term");

  const Matrix q_mat = dense_q_matrix(m_count, sys.gamma);

  // Full-sample covariance as the batch average (exact for partitions).
  Matrix sxx_full(p, p);
  for (const auto& bm : sys.moments) {
    for (std::size_t k = 0; k < sxx_full.entries().size(); ++k) {
      sxx_full.entries()[k] += bm.sxx.entries()[k];
    }
  }
  for (double& v : sxx_full.entries()) v /= static_cast<double>(m_count);
  const LuFactorization sxx_lu(sxx_full);

  // g = B theta_ols* - Sxy*, blockwise.
  std::vector<Vector> g(m_count);
  for (std::size_t m = 0; m < m_count; ++m) {
    g[m] = sys.moments[m].sxx * theta_ols - sys.moments[m].sxy;
  }
  // h = (Q (x) I_p) g.
  std::vector<Vector> h(m_count, Vector(p, 0.0));
  for (std::size_t m = 0; m < m_count; ++m) {
    for (std::size_t j = 0; j < m_count; ++j) {
      const double qmj = q_mat(m, j);
      if (qmj == 0.0) continue;
      for (std::size_t i = 0; i < p; ++i) h[m][i] += qmj * g[j][i];
    }
  }
  // s = sum_m block_m(B h) = sum_m Sxx^(m) h_{m-1}.
  Vector s(p, 0.0);
  for (std::size_t m = 0; m < m_count; ++m) {
    const Vector wm = sys.moments[m].sxx * h[(m + m_count - 1) % m_count];
    for (std::size_t i = 0; i < p; ++i) s[i] += wm[i];
  }
  const Vector z = sxx_lu.solve(s);

  Vector e(m_count * p);
  for (std::size_t m = 0; m < m_count; ++m) {
    for (std::size_t i = 0; i < p; ++i) {
      e[m * p + i] = z[i] / static_cast<double>(m_count) - h[m][i];
    }
  }
  return e;
}

Matrix asymptotic_variance(double alpha, double gamma, std::size_t batch_count,
                           double sigma, const Matrix& sigma_xx) {
  if (!(sigma >= 0.0)) throw invalid_input("asymptotic_variance: sigma must be nonnegative");
  if (!std::isfinite(alpha)) throw invalid_input("asymptotic_variance: alpha must be finite");
  if (!linalg::is_symmetric(sigma_xx, tol::kSymmetryRel)) {
    throw invalid_input("asymptotic_variance: sigma_xx must be symmetric");
  }
  Matrix out = LuFactorization(sigma_xx).inverse();
  if (alpha != 0.0) {
    check_gamma(gamma, "asymptotic_variance");
    const double d = d_gamma_closed(batch_count, gamma).value;
    const double scale = alpha * alpha * static_cast<double>(batch_count) * d * d;
    for (std::size_t k = 0; k < out.entries().size(); ++k) {
      out.entries()[k] += scale * sigma_xx.entries()[k];
    }
  }
  const double s2 = sigma * sigma;
  for (double& v : out.entries()) v *= s2;
  return out;
}

ShuffleScan shuffle_error_scan(const DataSet& ds, std::size_t batch_count,
                               std::size_t num_partitions, double alpha, double gamma,
                               std::uint64_t seed) {
  (void)alpha;  // E^(k) is the alpha-free first-order coefficient
  if (batch_count < 2) throw invalid_input("shuffle_error_scan: need at least two batches");
  if (num_partitions < 1) throw invalid_input("shuffle_error_scan: need K >= 1");
  check_gamma(gamma, "shuffle_error_scan");
  const std::size_t n_obs = ds.num_obs();
  const std::size_t p = ds.dim();
  if (n_obs % batch_count != 0) {
    throw invalid_input("shuffle_error_scan: N not divisible by batch count");
  }
  const std::size_t n = n_obs / batch_count;

  const Vector theta_ols = opt::ols(ds);
  Vector resid(n_obs);
  for (std::size_t i = 0; i < n_obs; ++i) {
    resid[i] = linalg::dot(ds.x.row(i), theta_ols) - ds.y[i];
  }
  const Matrix q_mat = dense_q_matrix(batch_count, gamma);
  const LuFactorization sxx_lu(data::full_moments(ds).sxx);

  ShuffleScan scan;
  scan.norms.assign(num_partitions, 0.0);

  harness::parallel_for(num_partitions, [&](std::size_t k) {
    std::vector<std::uint32_t> perm(n_obs);
    std::iota(perm.begin(), perm.end(), 0u);
    rng::RandomStream stream(rng::derive_seed(seed, k));
    stream.shuffle(perm);

    // g_m = Sxx^(k,m) theta_ols - Sxy^(k,m) = (1/n) sum_i resid_i x_i.
    std::vector<Vector> g(batch_count, Vector(p, 0.0));
    for (std::size_t m = 0; m < batch_count; ++m) {
      for (std::size_t t = 0; t < n; ++t) {
        const std::uint32_t idx = perm[m * n + t];
        const double r = resid[idx];
        const auto row = ds.x.row(idx);
        for (std::size_t i = 0; i < p; ++i) g[m][i] += r * row[i];
      }
      for (double& v : g[m]) v /= static_cast<double>(n);
    }
    std::vector<Vector> h(batch_count, Vector(p, 0.0));
    for (std::size_t m = 0; m < batch_count; ++m) {
      for (std::size_t j = 0; j < batch_count; ++j) {
        const double qmj = q_mat(m, j);
        if (qmj == 0.0) continue;
        for (std::size_t i = 0; i < p; ++i) h[m][i] += qmj * g[j][i];
      }
    }
    // s = sum_m Sxx^(k,m) h_{m-1}, evaluated through the data slices.
    Vector s(p, 0.0);
    for (std::size_t m = 0; m < batch_count; ++m) {
      const Vector& hm = h[(m + batch_count - 1) % batch_count];
      for (std::size_t t = 0; t < n; ++t) {
        const std::uint32_t idx = perm[m * n + t];
        const auto row = ds.x.row(idx);
        const double proj = linalg::dot(row, hm) / static_cast<double>(n);
        for (std::size_t i = 0; i < p; ++i) s[i] += proj * row[i];
      }
    }
    const Vector z = sxx_lu.solve(s);
    double total = 0.0;
    for (std::size_t m = 0; m < batch_count; ++m) {
      for (std::size_t i = 0; i < p; ++i) {
        const double e = z[i] / static_cast<double>(batch_count) - h[m][i];
        total += e * e;
      }
    }
    scan.norms[k] = std::sqrt(total);
  });

  scan.max_norm = 0.0;
  for (double v : scan.norms) scan.max_norm = std::max(scan.max_norm, v);
  return scan;
}

}  // namespace mgdm::stability
