#include <benchmark/benchmark.h>

#include "mgdm/dataset.hpp"
#include "mgdm/linalg.hpp"
#include "mgdm/optimizer.hpp"
#include "mgdm/rng.hpp"
#include "mgdm/spectral.hpp"
#include "mgdm/stability.hpp"

using namespace mgdm;

namespace {

data::DataSet make_dataset(std::size_t n, std::size_t p) {
  return data::generate_dataset(
      {.num_obs = n, .dim = p, .kappa = 1.0, .sigma = 1.0, .seed = 7});
}

void bm_sym_eigen(benchmark::State& state) {
  const std::size_t p = static_cast<std::size_t>(state.range(0));
  const auto ds = make_dataset(20 * p, p);
  const auto sxx = data::full_moments(ds).sxx;
  for (auto _ : state) {
    auto spec = linalg::sym_eigen(sxx);
    benchmark::DoNotOptimize(spec.eigenvalues.data());
  }
}
BENCHMARK(bm_sym_eigen)->Arg(10)->Arg(50)->Arg(100);

void bm_assemble_and_solve(benchmark::State& state) {
  const std::size_t p = static_cast<std::size_t>(state.range(0));
  const auto ds = make_dataset(10 * 100, p);
  const auto plan = data::make_batch_plan(1000, 100, data::PlanMode::fixed, 1, 3);
  const auto moments = data::epoch_moments(ds, plan, 0);
  for (auto _ : state) {
    const auto sys = stability::assemble_omega(moments, 0.05, 0.5);
    const auto sol = stability::solve_stable(sys);
    benchmark::DoNotOptimize(sol.residual);
  }
}
BENCHMARK(bm_assemble_and_solve)->Arg(10)->Arg(25)->Arg(50);

void bm_mgdm_epochs(benchmark::State& state) {
  const auto ds = make_dataset(5000, 50);
  const auto plan = data::make_batch_plan(5000, 500, data::PlanMode::fixed, 30, 3);
  const auto tune = spectral::optimal_tuning(51.0, 1.0, spectral::TuningMode::global);
  for (auto _ : state) {
    opt::GdmConfig cfg{.alpha = tune.alpha, .gamma = tune.gamma, .epochs = 30};
    const auto trace = opt::run_mgdm(ds, plan, cfg);
    benchmark::DoNotOptimize(trace.theta_final.data());
  }
}
BENCHMARK(bm_mgdm_epochs);

void bm_epoch_moments_shuffled(benchmark::State& state) {
  const auto ds = make_dataset(5000, 50);
  const auto plan = data::make_batch_plan(5000, 500, data::PlanMode::shuffled, 8, 3);
  std::size_t epoch = 0;
  for (auto _ : state) {
    const auto moments = data::epoch_moments(ds, plan, epoch % 8);
    benchmark::DoNotOptimize(moments.front().sxy.data());
    ++epoch;
  }
}
BENCHMARK(bm_epoch_moments_shuffled);

void bm_d_gamma_closed(benchmark::State& state) {
  const std::size_t m = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    const auto d = stability::d_gamma_closed(m, 0.9);
    benchmark::DoNotOptimize(d.value);
  }
}
BENCHMARK(bm_d_gamma_closed)->Arg(10)->Arg(100)->Arg(1000);

void bm_shuffle_scan(benchmark::State& state) {
  const auto ds = make_dataset(5000, 50);
  for (auto _ : state) {
    const auto scan = stability::shuffle_error_scan(ds, 10, 32, 0.01, 0.5, 5);
    benchmark::DoNotOptimize(scan.max_norm);
  }
}
BENCHMARK(bm_shuffle_scan);

}  // namespace

BENCHMARK_MAIN();
