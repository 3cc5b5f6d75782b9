#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mgdm/csv_ingest.hpp"
#include "mgdm/dataset.hpp"

namespace mgdm::harness {

enum class ExperimentKind { converge, stable_ee, dgamma_curve, compare, tune, ingest };

std::string kind_name(ExperimentKind kind);

/// Declarative description of one experiment run. Only the fields relevant to
/// `kind` are consulted; the loader in tools/ fills desk-scale defaults.
struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::converge;
  data::SimConfig sim;                          // synthetic design (seed unused)
  std::vector<std::pair<double, double>> grid;  // (alpha, gamma) points
  std::vector<double> gamma_grid;               // dgamma curve
  std::vector<double> alpha_grid;               // tune small-alpha rows
  std::vector<double> kappas;                   // converge / tune
  std::size_t replications = 25;
  std::size_t epochs = 30;
  std::size_t batch_size = 500;
  std::size_t batch_count = 10;                 // dgamma curve
  std::uint64_t master_seed = 0;
  std::string out_dir = "out";
  bool full_scale = false;
  // ingest only
  std::string csv_path;
  std::vector<data::ColumnSpec> schema;
  std::string response_column;
};

/// One long-format output record; summary.csv is exactly these rows.
struct SummaryRow {
  std::string kind;
  std::string method;
  std::string param;
  std::int64_t index = 0;
  std::string stat;
  double value = 0.0;
};

struct SummaryTable {
  std::vector<SummaryRow> rows;
};

struct SkippedPoint {
  std::string param;
  std::string verdict;
};

struct ExperimentResult {
  SummaryTable table;
  std::vector<SkippedPoint> skipped;
  std::vector<std::uint64_t> replication_seeds;  // master_seed ^ replication index
};

/// Executes the experiment described by the spec. Deterministic in
/// (spec, master_seed) for any worker-thread count.
ExperimentResult run_experiment(const ExperimentSpec& spec);

/// Median of a sample (mean of the central pair for even sizes).
double median(std::vector<double> values);

/// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace mgdm::harness
