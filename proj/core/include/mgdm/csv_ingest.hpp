#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mgdm/dataset.hpp"

namespace mgdm::data {

enum class ColumnKind { numeric, categorical };

struct ColumnSpec {
  std::string name;
  ColumnKind kind = ColumnKind::numeric;
  std::size_t top_k = 0;  // categorical only: number of levels kept
};

struct IngestResult {
  DataSet dataset;
  std::vector<std::string> feature_names;  // numerics first, then dummy blocks
  std::size_t rows_read = 0;
  std::size_t rows_kept = 0;
};

/// RFC-4180 CSV ingestion replicating the airline preprocessing: numeric
/// columns standardized to mean 0 / variance 1 (1/N convention), categorical
/// columns mapped to top_k-level dummies with the most frequent level as
/// reference (ties by level name), rows with missing required fields or
/// out-of-top-k levels dropped.
IngestResult ingest_csv(const std::string& path, const std::vector<ColumnSpec>& schema,
                        const std::string& response_column);

/// Minimal RFC-4180 parser used by ingest_csv; exposed for tests.
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

}  // namespace mgdm::data
