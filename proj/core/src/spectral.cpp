#include "mgdm/spectral.hpp"

#include <cmath>
#include <limits>

#include "mgdm/errors.hpp"

namespace mgdm::spectral {

namespace {

void validate(const SpectralQuery& q) {
  if (q.eigenvalues.empty()) throw invalid_input("rho_d: empty spectrum");
  if (!(q.alpha > 0.0) || !std::isfinite(q.alpha)) {
    throw invalid_input("rho_d: alpha must be finite and positive");
  }
  if (!(q.gamma >= 0.0) || !std::isfinite(q.gamma)) {
    throw invalid_input("rho_d: gamma must be finite and nonnegative");
  }
  double prev = std::numeric_limits<double>::infinity();
  for (double lambda : q.eigenvalues) {
    if (!(lambda > 0.0) || lambda > prev) {
      throw invalid_input("rho_d: eigenvalues must be positive and descending");
    }
    prev = lambda;
  }
}

/// Largest root magnitude of xi^2 - (1+gamma-alpha*lambda) xi + gamma = 0.
double root_magnitude(double alpha, double gamma, double lambda) {
  const double b = 1.0 + gamma - alpha * lambda;
  const double disc = b * b - 4.0 * gamma;
  if (disc < 0.0) return std::sqrt(gamma);
  const double s = std::sqrt(disc);
  return 0.5 * std::max(std::abs(b + s), std::abs(b - s));
}

}  // namespace

double rho_d(const SpectralQuery& query) {
  validate(query);
  double rho = 0.0;
  for (double lambda : query.eigenvalues) {
    rho = std::max(rho, root_magnitude(query.alpha, query.gamma, lambda));
  }
  return rho;
}

Verdict check_convergence(double alpha, double gamma, double lambda1) {
  if (!(alpha > 0.0) || !(gamma >= 0.0) || !(lambda1 > 0.0)) {
    throw invalid_input("check_convergence: require alpha > 0, gamma >= 0, lambda1 > 0");
  }
  const double alpha_cap = 2.0 * (1.0 + gamma) / lambda1;
  Verdict v;
  if (gamma > 1.0) {
    v.outcome = Convergence::diverges;
    v.binding_condition = "gamma > 1";
  } else if (alpha > alpha_cap) {
    v.outcome = Convergence::diverges;
    v.binding_condition = "alpha > 2(1+gamma)/lambda1";
  } else if (gamma == 1.0) {
    v.outcome = Convergence::boundary;
    v.binding_condition = "gamma = 1";
  } else if (alpha == alpha_cap) {
    v.outcome = Convergence::boundary;
    v.binding_condition = "alpha = 2(1+gamma)/lambda1";
  } else {
    v.outcome = Convergence::converges;
    v.binding_condition = "0 <= gamma < 1 and 0 < alpha < 2(1+gamma)/lambda1";
  }
  return v;
}

TuningReport optimal_tuning(double lambda1, double lambda_p, TuningMode mode,
                            std::optional<double> alpha_opt) {
  if (!(lambda_p > 0.0) || !(lambda1 >= lambda_p)) {
    throw invalid_input("optimal_tuning: require lambda1 >= lambda_p > 0");
  }
  TuningReport report;
  report.mode = mode;
  switch (mode) {
    case TuningMode::global: {
      const double s1 = std::sqrt(lambda1);
      const double sp = std::sqrt(lambda_p);
      report.alpha = 4.0 / ((s1 + sp) * (s1 + sp));
      report.gamma = ((s1 - sp) / (s1 + sp)) * ((s1 - sp) / (s1 + sp));
      const double c = std::sqrt(lambda1 / lambda_p);
      report.rho = (c - 1.0) / (c + 1.0);
      break;
    }
    case TuningMode::gd_only: {
      report.alpha = 2.0 / (lambda1 + lambda_p);
      report.gamma = 0.0;
      const double c = lambda1 / lambda_p;
      report.rho = (c - 1.0) / (c + 1.0);
      break;
    }
    case TuningMode::small_alpha: {
      if (!alpha_opt || !(*alpha_opt > 0.0) || !(*alpha_opt < 1.0 / lambda1)) {
        throw invalid_input("optimal_tuning: small-alpha mode needs alpha in (0, 1/lambda1)");
      }
      const double root = std::sqrt(*alpha_opt * lambda_p);
      report.alpha = *alpha_opt;
      report.gamma = (1.0 - root) * (1.0 - root);
      report.rho = 1.0 - root;
      break;
    }
  }
  return report;
}

}  // namespace mgdm::spectral
