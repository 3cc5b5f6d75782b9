#pragma once

#include <optional>
#include <string>
#include <vector>

namespace mgdm::spectral {

struct SpectralQuery {
  std::vector<double> eigenvalues;  // descending, strictly positive
  double alpha = 0.0;               // > 0
  double gamma = 0.0;               // >= 0
};

/// Spectral radius of the momentum iteration matrix D = [Delta, -gamma I; I, 0]
/// computed per eigenvalue from the roots of xi^2 - (1+gamma-alpha*lambda) xi
/// + gamma: magnitude sqrt(gamma) when the discriminant is negative, otherwise
/// the larger absolute real root; the maximum over the spectrum is returned.
double rho_d(const SpectralQuery& query);

enum class Convergence { converges, diverges, boundary };

struct Verdict {
  Convergence outcome = Convergence::boundary;
  std::string binding_condition;
};

/// Total classification of (alpha, gamma) against the convergence conditions:
/// converges iff 0 <= gamma < 1 and 0 < alpha < 2(1+gamma)/lambda1, diverges
/// iff gamma > 1 or alpha > 2(1+gamma)/lambda1, boundary on the equalities.
Verdict check_convergence(double alpha, double gamma, double lambda1);

enum class TuningMode { global, gd_only, small_alpha };

struct TuningReport {
  double alpha = 0.0;
  double gamma = 0.0;
  double rho = 0.0;   // predicted convergence factor, in [0, 1)
  TuningMode mode = TuningMode::global;
};

/// Optimal tuning for a spectrum [lambda_p, lambda1]:
///   global:      alpha = 4/(sqrt(l1)+sqrt(lp))^2, gamma = ((sqrt(l1)-sqrt(lp))
///                /(sqrt(l1)+sqrt(lp)))^2, rho = (sqrt(l1/lp)-1)/(sqrt(l1/lp)+1)
///   gd_only:     alpha = 2/(l1+lp), gamma = 0, rho = (l1/lp-1)/(l1/lp+1)
///   small_alpha: given alpha in (0, 1/l1), gamma = (1-sqrt(alpha lp))^2 and
///                rho = 1 - sqrt(alpha lp)
TuningReport optimal_tuning(double lambda1, double lambda_p, TuningMode mode,
                            std::optional<double> alpha_opt = {});

}  // namespace mgdm::spectral
