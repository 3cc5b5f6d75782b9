#include "mgdm/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mgdm/errors.hpp"
#include "mgdm/linalg.hpp"
#include "mgdm/rng.hpp"

namespace mgdm::data {

namespace {

constexpr std::uint64_t kSaltDesign = 0xD5167;
constexpr std::uint64_t kSaltNoise = 0x17A05E;

void validate(const SimConfig& cfg) {
  if (cfg.dim < 1 || cfg.num_obs < cfg.dim) {
    throw invalid_input("SimConfig: require N >= p >= 1");
  }
  if (!(cfg.kappa >= 0.0) || !std::isfinite(cfg.kappa)) {
    throw invalid_input("SimConfig: kappa must be finite and nonnegative");
  }
  if (!(cfg.sigma >= 0.0) || !std::isfinite(cfg.sigma)) {
    throw invalid_input("SimConfig: sigma must be finite and nonnegative");
  }
}

}  // namespace

DataSet generate_dataset(const SimConfig& cfg, const std::optional<Vector>& theta0_override) {
  validate(cfg);
  const std::size_t n = cfg.num_obs;
  const std::size_t p = cfg.dim;

  Vector theta0(p);
  if (theta0_override) {
    if (theta0_override->size() != p) {
      throw invalid_input("generate_dataset: theta0 override has wrong length");
    }
    theta0 = *theta0_override;
  } else {
    for (std::size_t j = 0; j < p; ++j) {
      theta0[j] = 10.0 * std::exp(-0.5 * static_cast<double>(j + 1));
    }
  }

  Matrix sigma_xx(p, p);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) sigma_xx(i, j) = cfg.kappa + (i == j ? 1.0 : 0.0);
  }
  const Matrix chol = linalg::cholesky(sigma_xx);

  rng::RandomStream design(rng::derive_seed(cfg.seed, kSaltDesign));
  rng::RandomStream noise(rng::derive_seed(cfg.seed, kSaltNoise));

  DataSet ds;
  ds.x = Matrix(n, p);
  ds.y.resize(n);
  Vector z(p);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j) z[j] = design.next_normal();
    auto row = ds.x.row(i);
    for (std::size_t j = 0; j < p; ++j) {
      // Row j of the lower-triangular factor against z.
      double v = 0.0;
      for (std::size_t k = 0; k <= j; ++k) v += chol(j, k) * z[k];
      row[j] = v;
    }
    ds.y[i] = linalg::dot(row, theta0) + cfg.sigma * noise.next_normal();
  }
  ds.theta0 = std::move(theta0);
  ds.sigma = cfg.sigma;
  return ds;
}

BatchPlan::BatchPlan(PlanMode mode, std::size_t num_obs, std::size_t batch_size,
                     std::size_t epochs, std::uint64_t seed)
    : mode_(mode), num_obs_(num_obs), batch_size_(batch_size), epochs_(epochs), seed_(seed) {
  if (batch_size_ < 1 || num_obs_ < 1) {
    throw invalid_input("BatchPlan: empty sample or batch");
  }
  if (mode_ == PlanMode::random) {
    if (batch_size_ > num_obs_) throw invalid_input("BatchPlan: batch size exceeds N");
  } else if (num_obs_ % batch_size_ != 0) {
    throw invalid_input("BatchPlan: N not divisible by batch size");
  }
  batch_count_ = std::max<std::size_t>(1, num_obs_ / batch_size_);
  if (epochs_ < 1) throw invalid_input("BatchPlan: need at least one epoch");

  std::vector<std::uint32_t> pool(num_obs_);
  std::iota(pool.begin(), pool.end(), 0u);

  const std::size_t stored_epochs = mode_ == PlanMode::fixed ? 1 : epochs_;
  epoch_assignments_.reserve(stored_epochs);
  for (std::size_t e = 0; e < stored_epochs; ++e) {
    rng::RandomStream stream(rng::derive_seed(seed_, e));
    std::vector<std::uint32_t> layout;
    layout.reserve(batch_count_ * batch_size_);
    if (mode_ == PlanMode::random) {
      for (std::size_t m = 0; m < batch_count_; ++m) {
        // Partial Fisher-Yates: the first batch_size entries of pool become a
        // uniform without-replacement draw; later batches reuse the permuted
        // pool, which stays a valid index set.
        for (std::size_t k = 0; k < batch_size_; ++k) {
          const std::size_t j = k + static_cast<std::size_t>(stream.next_below(num_obs_ - k));
          std::swap(pool[k], pool[j]);
        }
        layout.insert(layout.end(), pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(batch_size_));
      }
    } else {
      stream.shuffle(pool);
      layout = pool;
    }
    epoch_assignments_.push_back(std::move(layout));
  }
}

std::span<const std::uint32_t> BatchPlan::batch(std::size_t epoch, std::size_t m) const {
  if (epoch >= epochs_ || m >= batch_count_) {
    throw invalid_input("BatchPlan::batch: index out of range");
  }
  const auto& layout = epoch_assignments_[mode_ == PlanMode::fixed ? 0 : epoch];
  return {layout.data() + m * batch_size_, batch_size_};
}

BatchPlan make_batch_plan(std::size_t num_obs, std::size_t batch_size, PlanMode mode,
                          std::size_t epochs, std::uint64_t seed) {
  return BatchPlan(mode, num_obs, batch_size, epochs, seed);
}

BatchMoments batch_moments(const DataSet& ds, std::span<const std::uint32_t> indices) {
  if (indices.empty()) throw invalid_input("batch_moments: empty index list");
  const std::size_t p = ds.dim();
  const std::size_t n = ds.num_obs();
  BatchMoments out;
  out.sxx = Matrix(p, p);
  out.sxy.assign(p, 0.0);
  for (std::uint32_t idx : indices) {
    if (idx >= n) throw invalid_input("batch_moments: index out of range");
    const auto row = ds.x.row(idx);
    const double yi = ds.y[idx];
    for (std::size_t a = 0; a < p; ++a) {
      const double xa = row[a];
      out.sxy[a] += yi * xa;
      double* dst = &out.sxx(a, a);
      for (std::size_t b = a; b < p; ++b) dst[b - a] += xa * row[b];
    }
  }
  const double inv = 1.0 / static_cast<double>(indices.size());
  for (std::size_t a = 0; a < p; ++a) {
    out.sxy[a] *= inv;
    for (std::size_t b = a; b < p; ++b) {
      out.sxx(a, b) *= inv;
      out.sxx(b, a) = out.sxx(a, b);
    }
  }
  return out;
}

std::vector<BatchMoments> epoch_moments(const DataSet& ds, const BatchPlan& plan,
                                        std::size_t epoch) {
  if (plan.num_obs() != ds.num_obs()) {
    throw invalid_input("epoch_moments: plan built for a different sample size");
  }
  std::vector<BatchMoments> out;
  out.reserve(plan.batch_count());
  for (std::size_t m = 0; m < plan.batch_count(); ++m) {
    out.push_back(batch_moments(ds, plan.batch(epoch, m)));
  }
  return out;
}

BatchMoments full_moments(const DataSet& ds) {
  std::vector<std::uint32_t> all(ds.num_obs());
  std::iota(all.begin(), all.end(), 0u);
  return batch_moments(ds, all);
}

}  // namespace mgdm::data
