#include <doctest.h>

#include <cmath>

#include "mgdm/errors.hpp"
#include "mgdm/linalg.hpp"
#include "mgdm/rng.hpp"
#include "mgdm/spectral.hpp"
#include "oracles.hpp"

using namespace mgdm;
using linalg::Matrix;
using spectral::Convergence;
using spectral::SpectralQuery;
using spectral::TuningMode;

TEST_CASE("rho_d: zero matrix case at alpha = 1/lambda, gamma = 0") {
  CHECK(spectral::rho_d({{1.0}, 1.0, 0.0}) == 0.0);
}

TEST_CASE("rho_d: gd tuning on the kappa = 1 spectrum gives 25/26") {
  const double rho = spectral::rho_d({{51.0, 1.0}, 2.0 / 52.0, 0.0});
  CHECK(rho == doctest::Approx(25.0 / 26.0).epsilon(1e-12));
}

TEST_CASE("rho_d: agrees with dense companion-matrix oracle") {
  rng::RandomStream stream(2024);
  for (int rep = 0; rep < 60; ++rep) {
    const std::size_t p = 2 + static_cast<std::size_t>(stream.next_below(3));  // p in 2..4
    // Random positive spectrum in a random orthonormal basis.
    std::vector<double> lambdas(p);
    for (auto& l : lambdas) l = 0.2 + 5.0 * stream.next_uniform();
    std::sort(lambdas.rbegin(), lambdas.rend());
    Matrix seed_sym(p, p);
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t j = i; j < p; ++j) {
        seed_sym(i, j) = stream.next_normal();
        seed_sym(j, i) = seed_sym(i, j);
      }
    }
    const auto basis = linalg::sym_eigen(seed_sym).eigenvectors;
    Matrix sigma(p, p);
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t j = 0; j < p; ++j) {
        double v = 0.0;
        for (std::size_t k = 0; k < p; ++k) v += basis(i, k) * lambdas[k] * basis(j, k);
        sigma(i, j) = v;
      }
    }
    const double alpha = 0.05 + stream.next_uniform();
    const double gamma = 1.6 * stream.next_uniform();

    const double fast = spectral::rho_d({lambdas, alpha, gamma});
    const double dense =
        oracles::dense_spectral_radius(oracles::companion_d(sigma, alpha, gamma));
    CHECK(std::abs(fast - dense) <= 1e-8);
  }
}

TEST_CASE("rho_d: region properties over random samples") {
  rng::RandomStream stream(99);
  int checked_a = 0, checked_c = 0, checked_e = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    std::vector<double> lambdas(3);
    for (auto& l : lambdas) l = 0.1 + 4.0 * stream.next_uniform();
    std::sort(lambdas.rbegin(), lambdas.rend());
    const double lambda1 = lambdas[0];

    // Convergent region: rho in [gamma, 1).
    {
      const double gamma = 0.999 * stream.next_uniform();
      const double alpha = 2.0 * (1.0 + gamma) / lambda1 * (0.02 + 0.96 * stream.next_uniform());
      const double rho = spectral::rho_d({lambdas, alpha, gamma});
      CHECK(rho >= gamma - 1e-12);
      CHECK(rho < 1.0);
      ++checked_a;
    }
    // Inside the complex window for every eigenvalue: rho = sqrt(gamma).
    {
      const double alpha = 1.0 / (lambda1 * (1.0 + stream.next_uniform()));
      double lo = 0.0, hi = 4.0;
      for (double l : lambdas) {
        const double root = std::sqrt(alpha * l);
        lo = std::max(lo, (1.0 - root) * (1.0 - root));
        hi = std::min(hi, (1.0 + root) * (1.0 + root));
      }
      if (lo < hi) {
        const double gamma = lo + (hi - lo) * stream.next_uniform();
        const double rho = spectral::rho_d({lambdas, alpha, gamma});
        CHECK(std::abs(rho - std::sqrt(gamma)) <= 1e-12);
        ++checked_c;
      }
    }
    // Divergent region: rho > 1.
    {
      double alpha, gamma;
      if (stream.next_uniform() < 0.5) {
        gamma = 1.0 + 3.0 * stream.next_uniform() + 1e-6;
        alpha = 2.0 * (1.0 + gamma) / lambda1 * stream.next_uniform();
        if (alpha <= 0.0) alpha = 1e-4;
      } else {
        gamma = 0.999 * stream.next_uniform();
        alpha = 2.0 * (1.0 + gamma) / lambda1 * (1.0 + stream.next_uniform() + 1e-6);
      }
      CHECK(spectral::rho_d({lambdas, alpha, gamma}) > 1.0);
      ++checked_e;
    }
  }
  CHECK(checked_a == 1000);
  CHECK(checked_c > 500);
  CHECK(checked_e == 1000);
}

TEST_CASE("rho_d: input validation") {
  CHECK_THROWS_AS(spectral::rho_d({{1.0, 2.0}, 0.1, 0.0}), invalid_input);  // ascending
  CHECK_THROWS_AS(spectral::rho_d({{2.0, 1.0}, 0.0, 0.0}), invalid_input);  // alpha = 0
  CHECK_THROWS_AS(spectral::rho_d({{2.0, -1.0}, 0.1, 0.0}), invalid_input);
}

TEST_CASE("check_convergence: the three verdicts") {
  CHECK(spectral::check_convergence(0.01, 0.5, 51.0).outcome == Convergence::converges);
  CHECK(spectral::check_convergence(0.05, 1.5, 51.0).outcome == Convergence::diverges);
  CHECK(spectral::check_convergence(0.2, 0.5, 51.0).outcome == Convergence::diverges);
  const double boundary_alpha = 2.0 * 1.5 / 51.0;
  CHECK(spectral::check_convergence(boundary_alpha, 0.5, 51.0).outcome ==
        Convergence::boundary);
  CHECK(spectral::check_convergence(0.01, 1.0, 51.0).outcome == Convergence::boundary);
}

TEST_CASE("optimal_tuning: equal eigenvalues degenerate to gamma = 0, rho = 0") {
  const auto report = spectral::optimal_tuning(2.0, 2.0, TuningMode::global);
  CHECK(report.gamma == 0.0);
  CHECK(report.rho == 0.0);
  CHECK(report.alpha == doctest::Approx(0.5));
}

TEST_CASE("optimal_tuning: kappa = 1, p = 50 design values") {
  const auto global = spectral::optimal_tuning(51.0, 1.0, TuningMode::global);
  CHECK(global.alpha == doctest::Approx(0.0603474).epsilon(1e-5));
  CHECK(global.gamma == doctest::Approx(0.5690333).epsilon(1e-5));
  CHECK(global.rho == doctest::Approx(0.7543429).epsilon(1e-6));

  const auto gd = spectral::optimal_tuning(51.0, 1.0, TuningMode::gd_only);
  CHECK(gd.alpha == doctest::Approx(1.0 / 26.0).epsilon(1e-14));
  CHECK(gd.rho == doctest::Approx(25.0 / 26.0).epsilon(1e-14));
}

TEST_CASE("optimal_tuning: small-alpha branch beats gamma = 0 decay") {
  const auto report = spectral::optimal_tuning(51.0, 1.0, TuningMode::small_alpha, 0.01);
  CHECK(report.gamma == doctest::Approx(0.81));
  CHECK(report.rho == doctest::Approx(0.9));
  CHECK(report.rho < 1.0 - 0.01);  // strictly better than the gamma = 0 factor

  CHECK_THROWS_AS(spectral::optimal_tuning(51.0, 1.0, TuningMode::small_alpha, 0.5),
                  invalid_input);
  CHECK_THROWS_AS(spectral::optimal_tuning(51.0, 1.0, TuningMode::small_alpha),
                  invalid_input);
}

TEST_CASE("optimal_tuning: global rho never above gd rho") {
  rng::RandomStream stream(5);
  for (int rep = 0; rep < 200; ++rep) {
    const double lp = 0.1 + stream.next_uniform();
    const double l1 = lp * (1.0 + 30.0 * stream.next_uniform());
    const auto global = spectral::optimal_tuning(l1, lp, TuningMode::global);
    const auto gd = spectral::optimal_tuning(l1, lp, TuningMode::gd_only);
    CHECK(global.rho <= gd.rho + 1e-15);
    CHECK(global.rho >= 0.0);
    CHECK(global.rho < 1.0);
    CHECK(gd.rho < 1.0);
  }
  const auto eq = spectral::optimal_tuning(2.0, 2.0, TuningMode::global);
  CHECK(eq.rho == spectral::optimal_tuning(2.0, 2.0, TuningMode::gd_only).rho);
}
