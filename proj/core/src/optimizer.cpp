#include "mgdm/optimizer.hpp"

#include <cmath>

#include "mgdm/errors.hpp"
#include "mgdm/linalg.hpp"
#include "mgdm/tolerances.hpp"

namespace mgdm::opt {

namespace {

void validate(const DataSet& ds, const BatchPlan& plan, const GdmConfig& cfg) {
  if (plan.num_obs() != ds.num_obs()) {
    throw invalid_input("run_mgdm: plan built for a different sample size");
  }
  if (!(cfg.alpha > 0.0) || !std::isfinite(cfg.alpha)) {
    throw invalid_input("run_mgdm: alpha must be finite and positive");
  }
  if (!(cfg.gamma >= 0.0) || !std::isfinite(cfg.gamma)) {
    throw invalid_input("run_mgdm: gamma must be finite and nonnegative");
  }
  if (cfg.epochs < 1) throw invalid_input("run_mgdm: need at least one epoch");
  if (cfg.epochs > plan.epochs()) {
    throw invalid_input("run_mgdm: plan holds fewer epochs than requested");
  }
  const std::size_t p = ds.dim();
  if (!cfg.theta_init.empty() && cfg.theta_init.size() != p) {
    throw invalid_input("run_mgdm: theta_init has wrong length");
  }
  if (!cfg.v_init.empty() && cfg.v_init.size() != p) {
    throw invalid_input("run_mgdm: v_init has wrong length");
  }
}

bool state_ok(const Vector& theta) {
  double ss = 0.0;
  for (double v : theta) {
    if (!std::isfinite(v)) return false;
    ss += v * v;
  }
  return ss <= tol::kDivergenceNorm * tol::kDivergenceNorm;
}

}  // namespace

GdmTrace run_mgdm(const DataSet& ds, const BatchPlan& plan, const GdmConfig& cfg,
                  const Vector* reference) {
  validate(ds, plan, cfg);
  const std::size_t p = ds.dim();
  const std::size_t batches = plan.batch_count();
  if (reference && reference->size() != p) {
    throw invalid_input("run_mgdm: reference has wrong length");
  }

  Vector theta = cfg.theta_init.empty() ? Vector(p, 0.0) : cfg.theta_init;
  Vector v = cfg.v_init.empty() ? Vector(p, 0.0) : cfg.v_init;
  Vector grad(p);

  // Fixed plans see the same batches every epoch; compute their moments once.
  std::vector<data::BatchMoments> cached;
  if (plan.mode() == data::PlanMode::fixed) {
    cached = data::epoch_moments(ds, plan, 0);
  }

  GdmTrace trace;
  trace.per_epoch_theta.reserve(cfg.epochs);
  for (std::size_t t = 0; t < cfg.epochs; ++t) {
    const std::vector<data::BatchMoments> scratch =
        plan.mode() == data::PlanMode::fixed ? std::vector<data::BatchMoments>{}
                                             : data::epoch_moments(ds, plan, t);
    const std::vector<data::BatchMoments>& use =
        plan.mode() == data::PlanMode::fixed ? cached : scratch;

    bool bad = false;
    for (std::size_t m = 0; m < batches && !bad; ++m) {
      const data::BatchMoments& bm = use[m];
      for (std::size_t i = 0; i < p; ++i) {
        grad[i] = linalg::dot(bm.sxx.row(i), theta) - bm.sxy[i];
      }
      for (std::size_t i = 0; i < p; ++i) {
        const double step = cfg.gamma * v[i] + cfg.alpha * grad[i];
        v[i] = step;
        theta[i] -= step;
      }
      bad = !state_ok(theta);
    }
    if (bad) {
      trace.diverged = true;
      trace.diverged_epoch = t + 1;
      break;
    }
    trace.per_epoch_theta.push_back(theta);
    if (reference) {
      trace.deltas.push_back(linalg::norm(theta - *reference));
    }
  }

  if (!trace.per_epoch_theta.empty()) {
    trace.theta_final = trace.per_epoch_theta.back();
  } else {
    trace.theta_final = cfg.theta_init.empty() ? Vector(p, 0.0) : cfg.theta_init;
  }
  trace.momentum_final = v;
  return trace;
}

Vector ols(const DataSet& ds) {
  const data::BatchMoments m = data::full_moments(ds);
  return linalg::solve_linear(m.sxx, m.sxy);
}

double estimation_error(const Vector& theta, const Vector& target) {
  if (theta.size() != target.size()) {
    throw invalid_input("estimation_error: length mismatch");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double d = theta[i] - target[i];
    s += d * d;
  }
  return s;
}

}  // namespace mgdm::opt
