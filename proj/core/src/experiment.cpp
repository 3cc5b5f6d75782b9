#include "mgdm/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>

#include "mgdm/errors.hpp"
#include "mgdm/optimizer.hpp"
#include "mgdm/outputs.hpp"
#include "mgdm/parallel.hpp"
#include "mgdm/rng.hpp"
#include "mgdm/spectral.hpp"
#include "mgdm/stability.hpp"

namespace mgdm::harness {

namespace {

constexpr std::uint64_t kSaltFixedPlan = 0xF17ED;
constexpr std::uint64_t kSaltShuffledPlan = 0x5A0FF;
constexpr std::uint64_t kSaltRandomPlan = 0x7A2D0;

std::string param_pair(double alpha, double gamma) {
  std::ostringstream os;
  os << "alpha=" << format_double(alpha) << ";gamma=" << format_double(gamma);
  return os.str();
}

std::string param_kappa(double kappa) {
  return "kappa=" + format_double(kappa);
}

data::SimConfig rep_config(const ExperimentSpec& spec, double kappa, std::uint64_t rep_seed) {
  data::SimConfig cfg = spec.sim;
  cfg.kappa = kappa;
  cfg.seed = rep_seed;
  return cfg;
}

/// Exact grid points where the stable-solution system is singular: gamma = 1,
/// alpha = 0, and alpha hitting 2(1+gamma)/lambda for a population eigenvalue.
bool stable_point_excluded(double alpha, double gamma, double lambda1, double lambda_p,
                           std::string& why) {
  if (gamma == 1.0) {
    why = "gamma = 1: stable-solution system singular";
    return true;
  }
  if (alpha == 0.0) {
    why = "alpha = 0: stable-solution system singular";
    return true;
  }
  for (double lambda : {lambda1, lambda_p}) {
    if (alpha == 2.0 * (1.0 + gamma) / lambda) {
      why = "alpha = 2(1+gamma)/lambda: stable-solution system singular";
      return true;
    }
  }
  return false;
}

ExperimentResult run_converge(const ExperimentSpec& spec) {
  const std::size_t reps = spec.replications;
  const std::size_t epochs = spec.epochs;
  const double lambda_p = 1.0;

  struct MethodSetup {
    std::string name;
    spectral::TuningMode mode;
  };
  const std::vector<MethodSetup> methods = {{"fmgd", spectral::TuningMode::gd_only},
                                            {"fmgdm", spectral::TuningMode::global}};

  ExperimentResult result;
  // deltas[method][kappa][rep] -> per-epoch deltas (empty when diverged).
  std::vector<std::vector<std::vector<std::vector<double>>>> deltas(
      methods.size(),
      std::vector<std::vector<std::vector<double>>>(
          spec.kappas.size(), std::vector<std::vector<double>>(reps)));
  std::vector<std::vector<std::size_t>> diverged(methods.size(),
                                                 std::vector<std::size_t>(spec.kappas.size(), 0));

  for (std::size_t ki = 0; ki < spec.kappas.size(); ++ki) {
    const double kappa = spec.kappas[ki];
    const double lambda1 = kappa * static_cast<double>(spec.sim.dim) + 1.0;
    std::vector<spectral::TuningReport> tunings;
    for (const auto& m : methods) {
      tunings.push_back(spectral::optimal_tuning(lambda1, lambda_p, m.mode));
    }
    parallel_for(reps, [&](std::size_t r) {
      const std::uint64_t rep_seed = spec.master_seed ^ (ki * reps + r);
      const data::DataSet ds = data::generate_dataset(rep_config(spec, kappa, rep_seed));
      const data::BatchPlan plan =
          data::make_batch_plan(spec.sim.num_obs, spec.batch_size, data::PlanMode::fixed,
                                epochs, rng::derive_seed(rep_seed, kSaltFixedPlan));
      const auto moments = data::epoch_moments(ds, plan, 0);
      for (std::size_t mi = 0; mi < methods.size(); ++mi) {
        const auto& tune = tunings[mi];
        const auto sys = stability::assemble_omega(moments, tune.alpha, tune.gamma);
        const auto sol = stability::solve_stable(sys);
        opt::GdmConfig cfg;
        cfg.alpha = tune.alpha;
        cfg.gamma = tune.gamma;
        cfg.epochs = epochs;
        const auto trace = opt::run_mgdm(ds, plan, cfg, &sol.per_batch.back());
        if (!trace.diverged) deltas[mi][ki][r] = trace.deltas;
      }
    });
  }

  for (std::size_t ki = 0; ki < spec.kappas.size(); ++ki) {
    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
      for (std::size_t r = 0; r < reps; ++r) {
        if (deltas[mi][ki][r].empty()) ++diverged[mi][ki];
      }
    }
  }

  for (std::size_t r = 0; r < spec.kappas.size() * reps; ++r) {
    result.replication_seeds.push_back(spec.master_seed ^ r);
  }
  for (std::size_t mi = 0; mi < methods.size(); ++mi) {
    for (std::size_t ki = 0; ki < spec.kappas.size(); ++ki) {
      const std::string param = param_kappa(spec.kappas[ki]);
      for (std::size_t t = 0; t < epochs; ++t) {
        std::vector<double> sample;
        for (std::size_t r = 0; r < reps; ++r) {
          if (!deltas[mi][ki][r].empty()) sample.push_back(deltas[mi][ki][r][t]);
        }
        if (sample.empty()) continue;
        result.table.rows.push_back({kind_name(spec.kind), methods[mi].name, param,
                                     static_cast<std::int64_t>(t + 1), "median_delta",
                                     median(std::move(sample))});
      }
      result.table.rows.push_back({kind_name(spec.kind), methods[mi].name, param, -1,
                                   "diverged_count",
                                   static_cast<double>(diverged[mi][ki])});
    }
  }
  return result;
}

ExperimentResult run_stable_ee(const ExperimentSpec& spec) {
  const std::size_t reps = spec.replications;
  const double lambda1 = spec.sim.kappa * static_cast<double>(spec.sim.dim) + 1.0;
  const double lambda_p = 1.0;

  std::vector<bool> excluded(spec.grid.size(), false);
  std::vector<std::string> reasons(spec.grid.size());
  for (std::size_t g = 0; g < spec.grid.size(); ++g) {
    excluded[g] =
        stable_point_excluded(spec.grid[g].first, spec.grid[g].second, lambda1, lambda_p,
                              reasons[g]);
  }

  std::vector<double> ols_log_ee(reps);
  std::vector<std::vector<double>> point_log_ee(spec.grid.size(),
                                                std::vector<double>(reps, 0.0));
  parallel_for(reps, [&](std::size_t r) {
    const std::uint64_t rep_seed = spec.master_seed ^ r;
    const data::DataSet ds = data::generate_dataset(rep_config(spec, spec.sim.kappa, rep_seed));
    const data::BatchPlan plan =
        data::make_batch_plan(spec.sim.num_obs, spec.batch_size, data::PlanMode::fixed, 1,
                              rng::derive_seed(rep_seed, kSaltFixedPlan));
    const auto moments = data::epoch_moments(ds, plan, 0);
    ols_log_ee[r] = std::log(opt::estimation_error(opt::ols(ds), *ds.theta0));
    for (std::size_t g = 0; g < spec.grid.size(); ++g) {
      if (excluded[g]) continue;
      const auto sys =
          stability::assemble_omega(moments, spec.grid[g].first, spec.grid[g].second);
      const auto sol = stability::solve_stable(sys);
      point_log_ee[g][r] =
          std::log(opt::estimation_error(sol.per_batch.back(), *ds.theta0));
    }
  });

  ExperimentResult result;
  for (std::size_t r = 0; r < reps; ++r) result.replication_seeds.push_back(spec.master_seed ^ r);
  for (std::size_t r = 0; r < reps; ++r) {
    result.table.rows.push_back({kind_name(spec.kind), "ols", "baseline",
                                 static_cast<std::int64_t>(r), "log_ee", ols_log_ee[r]});
  }
  for (std::size_t g = 0; g < spec.grid.size(); ++g) {
    const std::string param = param_pair(spec.grid[g].first, spec.grid[g].second);
    if (excluded[g]) {
      result.table.rows.push_back({kind_name(spec.kind), "skipped", param, -1, "skipped", 1.0});
      result.skipped.push_back({param, reasons[g]});
      continue;
    }
    for (std::size_t r = 0; r < reps; ++r) {
      result.table.rows.push_back({kind_name(spec.kind), "stable", param,
                                   static_cast<std::int64_t>(r), "log_ee", point_log_ee[g][r]});
    }
  }
  return result;
}

ExperimentResult run_dgamma(const ExperimentSpec& spec) {
  ExperimentResult result;
  const std::string param = "M=" + std::to_string(spec.batch_count);
  for (std::size_t i = 0; i < spec.gamma_grid.size(); ++i) {
    const double gamma = spec.gamma_grid[i];
    if (gamma == 1.0) {
      const std::string point = param + ";gamma=" + format_double(gamma);
      result.table.rows.push_back({kind_name(spec.kind), "skipped", point, -1, "skipped", 1.0});
      result.skipped.push_back({point, "gamma = 1: generalized inverse undefined"});
      continue;
    }
    const auto d = stability::d_gamma_closed(spec.batch_count, gamma);
    result.table.rows.push_back({kind_name(spec.kind), "closed_form",
                                 param + ";gamma=" + format_double(gamma),
                                 static_cast<std::int64_t>(i), "d_gamma", d.value});
  }
  return result;
}

ExperimentResult run_compare(const ExperimentSpec& spec) {
  const std::size_t reps = spec.replications;
  const double lambda1 = spec.sim.kappa * static_cast<double>(spec.sim.dim) + 1.0;

  struct MethodSetup {
    std::string name;
    data::PlanMode mode;
    std::uint64_t salt;
  };
  const std::vector<MethodSetup> methods = {
      {"fmgdm", data::PlanMode::fixed, kSaltFixedPlan},
      {"smgdm", data::PlanMode::shuffled, kSaltShuffledPlan},
      {"rmgdm", data::PlanMode::random, kSaltRandomPlan}};

  std::vector<bool> boundary(spec.grid.size(), false);
  std::vector<std::string> reasons(spec.grid.size());
  for (std::size_t g = 0; g < spec.grid.size(); ++g) {
    const auto verdict =
        spectral::check_convergence(spec.grid[g].first, spec.grid[g].second, lambda1);
    if (verdict.outcome == spectral::Convergence::boundary) {
      boundary[g] = true;
      reasons[g] = "boundary: " + verdict.binding_condition;
    }
  }

  std::vector<double> ols_log_ee(reps);
  // log EE per (grid, method, rep); NaN marks a diverged run.
  std::vector<std::vector<std::vector<double>>> log_ee(
      spec.grid.size(), std::vector<std::vector<double>>(
                            methods.size(), std::vector<double>(reps, 0.0)));
  parallel_for(reps, [&](std::size_t r) {
    const std::uint64_t rep_seed = spec.master_seed ^ r;
    const data::DataSet ds = data::generate_dataset(rep_config(spec, spec.sim.kappa, rep_seed));
    ols_log_ee[r] = std::log(opt::estimation_error(opt::ols(ds), *ds.theta0));
    for (std::size_t g = 0; g < spec.grid.size(); ++g) {
      if (boundary[g]) continue;
      for (std::size_t mi = 0; mi < methods.size(); ++mi) {
        const data::BatchPlan plan = data::make_batch_plan(
            spec.sim.num_obs, spec.batch_size, methods[mi].mode, spec.epochs,
            rng::derive_seed(rep_seed, methods[mi].salt));
        opt::GdmConfig cfg;
        cfg.alpha = spec.grid[g].first;
        cfg.gamma = spec.grid[g].second;
        cfg.epochs = spec.epochs;
        const auto trace = opt::run_mgdm(ds, plan, cfg);
        log_ee[g][mi][r] =
            trace.diverged
                ? std::numeric_limits<double>::quiet_NaN()
                : std::log(opt::estimation_error(trace.theta_final, *ds.theta0));
      }
    }
  });

  ExperimentResult result;
  for (std::size_t r = 0; r < reps; ++r) result.replication_seeds.push_back(spec.master_seed ^ r);
  for (std::size_t r = 0; r < reps; ++r) {
    result.table.rows.push_back({kind_name(spec.kind), "ols", "baseline",
                                 static_cast<std::int64_t>(r), "log_ee", ols_log_ee[r]});
  }
  for (std::size_t g = 0; g < spec.grid.size(); ++g) {
    const std::string param = param_pair(spec.grid[g].first, spec.grid[g].second);
    if (boundary[g]) {
      result.table.rows.push_back({kind_name(spec.kind), "skipped", param, -1, "skipped", 1.0});
      result.skipped.push_back({param, reasons[g]});
      continue;
    }
    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
      std::size_t bad = 0;
      for (std::size_t r = 0; r < reps; ++r) {
        if (std::isnan(log_ee[g][mi][r])) {
          ++bad;
          continue;
        }
        result.table.rows.push_back({kind_name(spec.kind), methods[mi].name, param,
                                     static_cast<std::int64_t>(r), "log_ee",
                                     log_ee[g][mi][r]});
      }
      result.table.rows.push_back({kind_name(spec.kind), methods[mi].name, param, -1,
                                   "diverged_count", static_cast<double>(bad)});
    }
  }
  return result;
}

ExperimentResult run_tune(const ExperimentSpec& spec) {
  ExperimentResult result;
  const double lambda_p = 1.0;
  for (double kappa : spec.kappas) {
    const double lambda1 = kappa * static_cast<double>(spec.sim.dim) + 1.0;
    const std::string param = param_kappa(kappa);
    for (auto mode : {spectral::TuningMode::global, spectral::TuningMode::gd_only}) {
      const auto report = spectral::optimal_tuning(lambda1, lambda_p, mode);
      const std::string method = mode == spectral::TuningMode::global ? "global" : "gd_only";
      result.table.rows.push_back({kind_name(spec.kind), method, param, 0, "alpha", report.alpha});
      result.table.rows.push_back({kind_name(spec.kind), method, param, 0, "gamma", report.gamma});
      result.table.rows.push_back({kind_name(spec.kind), method, param, 0, "rho", report.rho});
    }
    for (std::size_t i = 0; i < spec.alpha_grid.size(); ++i) {
      const double alpha = spec.alpha_grid[i];
      const std::string point = param + ";alpha=" + format_double(alpha);
      if (!(alpha > 0.0) || !(alpha < 1.0 / lambda1)) {
        result.table.rows.push_back({kind_name(spec.kind), "skipped", point, -1, "skipped", 1.0});
        result.skipped.push_back({point, "small-alpha mode needs alpha in (0, 1/lambda1)"});
        continue;
      }
      const auto report =
          spectral::optimal_tuning(lambda1, lambda_p, spectral::TuningMode::small_alpha, alpha);
      result.table.rows.push_back({kind_name(spec.kind), "small_alpha", point,
                                   static_cast<std::int64_t>(i), "gamma", report.gamma});
      result.table.rows.push_back({kind_name(spec.kind), "small_alpha", point,
                                   static_cast<std::int64_t>(i), "rho", report.rho});
    }
  }
  return result;
}

ExperimentResult run_ingest(const ExperimentSpec& spec) {
  const auto ingest = data::ingest_csv(spec.csv_path, spec.schema, spec.response_column);
  const auto coef = opt::ols(ingest.dataset);

  double ss_res = 0.0;
  double mean_y = 0.0;
  for (double v : ingest.dataset.y) mean_y += v;
  mean_y /= static_cast<double>(ingest.dataset.y.size());
  double ss_tot = 0.0;
  for (std::size_t i = 0; i < ingest.dataset.num_obs(); ++i) {
    const double fit = linalg::dot(ingest.dataset.x.row(i), coef);
    const double res = ingest.dataset.y[i] - fit;
    ss_res += res * res;
    const double dev = ingest.dataset.y[i] - mean_y;
    ss_tot += dev * dev;
  }

  ExperimentResult result;
  const std::string param = "file=" + spec.csv_path;
  result.table.rows.push_back({kind_name(spec.kind), "dataset", param, 0, "rows_read",
                               static_cast<double>(ingest.rows_read)});
  result.table.rows.push_back({kind_name(spec.kind), "dataset", param, 0, "rows_kept",
                               static_cast<double>(ingest.rows_kept)});
  result.table.rows.push_back({kind_name(spec.kind), "dataset", param, 0, "predictors",
                               static_cast<double>(ingest.feature_names.size())});
  for (std::size_t j = 0; j < coef.size(); ++j) {
    result.table.rows.push_back({kind_name(spec.kind), "ols",
                                 "feature=" + ingest.feature_names[j],
                                 static_cast<std::int64_t>(j), "coef", coef[j]});
  }
  result.table.rows.push_back({kind_name(spec.kind), "ols", param, 0, "r_squared",
                               ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 0.0});
  return result;
}

}  // namespace

std::string kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::converge: return "converge";
    case ExperimentKind::stable_ee: return "stable-ee";
    case ExperimentKind::dgamma_curve: return "dgamma";
    case ExperimentKind::compare: return "compare";
    case ExperimentKind::tune: return "tune";
    case ExperimentKind::ingest: return "ingest";
  }
  throw invalid_input("kind_name: unknown kind");
}

double median(std::vector<double> values) {
  if (values.empty()) throw empty_data("median: empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw invalid_input("fit_slope: need two samples of equal length");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw invalid_input("fit_slope: degenerate abscissa");
  return sxy / sxx;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  if (spec.replications < 1) throw invalid_input("run_experiment: need R >= 1");
  switch (spec.kind) {
    case ExperimentKind::converge: return run_converge(spec);
    case ExperimentKind::stable_ee: return run_stable_ee(spec);
    case ExperimentKind::dgamma_curve: return run_dgamma(spec);
    case ExperimentKind::compare: return run_compare(spec);
    case ExperimentKind::tune: return run_tune(spec);
    case ExperimentKind::ingest: return run_ingest(spec);
  }
  throw invalid_input("run_experiment: unknown kind");
}

}  // namespace mgdm::harness
