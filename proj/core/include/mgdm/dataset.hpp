#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mgdm/matrix.hpp"

namespace mgdm::data {

using linalg::Matrix;
using linalg::Vector;

/// Synthetic-design parameters: N observations of dimension p with covariate
/// covariance I_p + kappa 11^T and noise standard deviation sigma.
struct SimConfig {
  std::size_t num_obs = 0;   // N
  std::size_t dim = 0;       // p
  double kappa = 0.0;
  double sigma = 1.0;
  std::uint64_t seed = 0;
};

struct DataSet {
  Matrix x;          // N x p design
  Vector y;          // N responses
  std::optional<Vector> theta0;  // generating coefficients, synthetic only
  std::optional<double> sigma;

  std::size_t num_obs() const { return x.rows(); }
  std::size_t dim() const { return x.cols(); }
};

enum class PlanMode { fixed, shuffled, random };

/// Per-epoch assignment of observation indices to minibatches.
///
/// Fixed plans draw one random partition and reuse it every epoch; shuffled
/// plans re-partition per epoch from an epoch-derived stream; random plans
/// draw each batch independently without replacement (batches may overlap).
class BatchPlan {
 public:
  BatchPlan(PlanMode mode, std::size_t num_obs, std::size_t batch_size,
            std::size_t epochs, std::uint64_t seed);

  PlanMode mode() const { return mode_; }
  std::size_t num_obs() const { return num_obs_; }
  std::size_t batch_size() const { return batch_size_; }
  std::size_t batch_count() const { return batch_count_; }
  std::size_t epochs() const { return epochs_; }
  std::uint64_t seed() const { return seed_; }

  /// Zero-based indices of batch m within the given epoch.
  std::span<const std::uint32_t> batch(std::size_t epoch, std::size_t m) const;

 private:
  PlanMode mode_;
  std::size_t num_obs_;
  std::size_t batch_size_;
  std::size_t batch_count_;
  std::size_t epochs_;
  std::uint64_t seed_;
  // Fixed mode stores a single epoch layout; other modes store one per epoch.
  std::vector<std::vector<std::uint32_t>> epoch_assignments_;
};

/// Per-batch second moments Sxx = |S|^-1 sum x x^T and Sxy = |S|^-1 sum y x.
struct BatchMoments {
  Matrix sxx;
  Vector sxy;
};

/// Draws the design of SimConfig: theta0_j = 10 exp(-j/2), rows of X are
/// L z with L = chol(I + kappa 11^T) and z iid standard normal, and
/// y = X theta0 + sigma eps. Fully determined by cfg.seed.
DataSet generate_dataset(const SimConfig& cfg,
                         const std::optional<Vector>& theta0_override = {});

BatchPlan make_batch_plan(std::size_t num_obs, std::size_t batch_size, PlanMode mode,
                          std::size_t epochs, std::uint64_t seed);

BatchMoments batch_moments(const DataSet& ds, std::span<const std::uint32_t> indices);

/// Moments of every batch in one epoch of the plan.
std::vector<BatchMoments> epoch_moments(const DataSet& ds, const BatchPlan& plan,
                                        std::size_t epoch);

/// Full-sample moments (all observations in one batch).
BatchMoments full_moments(const DataSet& ds);

}  // namespace mgdm::data
