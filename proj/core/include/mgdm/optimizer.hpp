#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "mgdm/dataset.hpp"

namespace mgdm::opt {

using data::BatchPlan;
using data::DataSet;
using linalg::Vector;

struct GdmConfig {
  double alpha = 0.0;   // learning rate, > 0
  double gamma = 0.0;   // momentum, >= 0
  std::size_t epochs = 0;
  Vector theta_init;    // empty -> zeros
  Vector v_init;        // empty -> zeros
};

/// Iterate history of one minibatch GDM run. A non-finite iterate or one with
/// norm above kDivergenceNorm marks the trace diverged at that epoch and halts
/// the run; recorded history then covers the completed epochs only.
struct GdmTrace {
  Vector theta_final;
  Vector momentum_final;
  std::vector<Vector> per_epoch_theta;   // theta^(t,M) for t = 1..T
  std::vector<double> deltas;            // ||theta^(t,M) - reference||, if given
  bool diverged = false;
  std::size_t diverged_epoch = 0;        // 1-based first bad epoch
};

/// Minibatch gradient descent with momentum:
///   v <- gamma v + alpha (Sxx^(m) theta - Sxy^(m)),  theta <- theta - v
/// sweeping batches in plan order, carrying (theta, v) across epochs. Batch
/// moments are cached once for fixed plans and recomputed per epoch otherwise.
GdmTrace run_mgdm(const DataSet& ds, const BatchPlan& plan, const GdmConfig& cfg,
                  const Vector* reference = nullptr);

/// Ordinary least squares via the normal equations.
Vector ols(const DataSet& ds);

/// Squared Euclidean distance ||theta - target||^2.
double estimation_error(const Vector& theta, const Vector& target);

}  // namespace mgdm::opt
