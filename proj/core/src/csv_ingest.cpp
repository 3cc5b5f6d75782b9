#include "mgdm/csv_ingest.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "mgdm/errors.hpp"

namespace mgdm::data {

namespace {

bool is_missing(const std::string& field) {
  return field.empty() || field == "NA" || field == "na" || field == "NaN";
}

bool parse_number(const std::string& field, double& out) {
  const char* begin = field.data();
  const char* end = begin + field.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

}  // namespace

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any_field = false;

  const std::size_t size = text.size();
  for (std::size_t i = 0; i < size; ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < size && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        quoted = true;
        any_field = true;
        break;
      case ',':
        row.push_back(std::move(field));
        field.clear();
        any_field = true;
        break;
      case '\r':
        break;
      case '\n':
        if (any_field || !field.empty() || !row.empty()) {
          row.push_back(std::move(field));
          field.clear();
          rows.push_back(std::move(row));
          row.clear();
          any_field = false;
        }
        break;
      default:
        field.push_back(c);
        any_field = true;
        break;
    }
  }
  if (quoted) throw schema_error("parse_csv: unterminated quoted field");
  if (any_field || !field.empty() || !row.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

IngestResult ingest_csv(const std::string& path, const std::vector<ColumnSpec>& schema,
                        const std::string& response_column) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("ingest_csv: cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw io_error("ingest_csv: read failure on " + path);

  const auto rows = parse_csv(buffer.str());
  if (rows.empty()) throw schema_error("ingest_csv: missing header row");
  const auto& header = rows.front();

  std::unordered_map<std::string, std::size_t> column_index;
  for (std::size_t j = 0; j < header.size(); ++j) column_index.emplace(header[j], j);

  const auto locate = [&](const std::string& name) {
    const auto it = column_index.find(name);
    if (it == column_index.end()) throw schema_error("ingest_csv: missing column " + name);
    return it->second;
  };
  const std::size_t response_idx = locate(response_column);
  std::vector<std::size_t> schema_idx;
  schema_idx.reserve(schema.size());
  for (const auto& col : schema) {
    if (col.kind == ColumnKind::categorical && col.top_k < 1) {
      throw schema_error("ingest_csv: categorical column " + col.name + " needs top_k >= 1");
    }
    schema_idx.push_back(locate(col.name));
  }

  // Pass 1: keep rows with all required fields present and numerics parseable.
  struct ParsedRow {
    std::vector<double> numerics;
    std::vector<std::string> levels;
    double response = 0.0;
  };
  std::vector<ParsedRow> parsed;
  const std::size_t rows_read = rows.size() - 1;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& raw = rows[r];
    if (raw.size() != header.size()) {
      throw schema_error("ingest_csv: row " + std::to_string(r) + " has wrong field count");
    }
    ParsedRow pr;
    bool keep = true;
    const std::string& resp = raw[response_idx];
    if (is_missing(resp)) {
      keep = false;
    } else if (!parse_number(resp, pr.response)) {
      throw schema_error("ingest_csv: non-numeric response value '" + resp + "'");
    }
    for (std::size_t c = 0; keep && c < schema.size(); ++c) {
      const std::string& field = raw[schema_idx[c]];
      if (is_missing(field)) {
        keep = false;
        break;
      }
      if (schema[c].kind == ColumnKind::numeric) {
        double v = 0.0;
        if (!parse_number(field, v)) {
          keep = false;  // unparseable numeric treated as missing
          break;
        }
        pr.numerics.push_back(v);
      } else {
        pr.levels.push_back(field);
      }
    }
    if (keep) parsed.push_back(std::move(pr));
  }

  // Pass 2: frequency-ranked levels per categorical column; ties break by name.
  std::vector<std::vector<std::string>> kept_levels;  // per categorical, reference first
  std::size_t cat_pos = 0;
  for (const auto& col : schema) {
    if (col.kind != ColumnKind::categorical) continue;
    std::map<std::string, std::size_t> freq;
    for (const auto& pr : parsed) ++freq[pr.levels[cat_pos]];
    std::vector<std::pair<std::string, std::size_t>> ranked(freq.begin(), freq.end());
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
    const std::size_t keep_n = std::min(col.top_k, ranked.size());
    std::vector<std::string> levels;
    for (std::size_t i = 0; i < keep_n; ++i) levels.push_back(ranked[i].first);
    kept_levels.push_back(std::move(levels));
    ++cat_pos;
  }

  // Pass 3: drop rows whose level fell outside the kept set.
  std::vector<const ParsedRow*> final_rows;
  for (const auto& pr : parsed) {
    bool keep = true;
    std::size_t cp = 0;
    for (const auto& col : schema) {
      if (col.kind != ColumnKind::categorical) continue;
      const auto& levels = kept_levels[cp];
      if (std::find(levels.begin(), levels.end(), pr.levels[cp]) == levels.end()) {
        keep = false;
        break;
      }
      ++cp;
    }
    if (keep) final_rows.push_back(&pr);
  }
  if (final_rows.empty()) throw empty_data("ingest_csv: no usable rows after filtering");

  // Layout: numeric columns in schema order, then dummy blocks per categorical.
  std::vector<std::string> feature_names;
  std::size_t numeric_count = 0;
  for (const auto& col : schema) {
    if (col.kind == ColumnKind::numeric) {
      feature_names.push_back(col.name);
      ++numeric_count;
    }
  }
  cat_pos = 0;
  for (const auto& col : schema) {
    if (col.kind != ColumnKind::categorical) continue;
    const auto& levels = kept_levels[cat_pos];
    for (std::size_t l = 1; l < levels.size(); ++l) {
      feature_names.push_back(col.name + "=" + levels[l]);
    }
    ++cat_pos;
  }

  const std::size_t n = final_rows.size();
  const std::size_t p = feature_names.size();
  if (p == 0) throw schema_error("ingest_csv: schema yields zero predictors");
  Matrix x(n, p);
  Vector y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const ParsedRow& pr = *final_rows[i];
    y[i] = pr.response;
    for (std::size_t c = 0; c < numeric_count; ++c) x(i, c) = pr.numerics[c];
    std::size_t out_col = numeric_count;
    std::size_t cp = 0;
    for (const auto& col : schema) {
      if (col.kind != ColumnKind::categorical) continue;
      const auto& levels = kept_levels[cp];
      for (std::size_t l = 1; l < levels.size(); ++l) {
        x(i, out_col++) = pr.levels[cp] == levels[l] ? 1.0 : 0.0;
      }
      ++cp;
    }
  }

  // Standardize numerics to mean 0, variance 1 (population 1/N convention).
  for (std::size_t c = 0; c < numeric_count; ++c) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += x(i, c);
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = x(i, c) - mean;
      var += d * d;
    }
    var /= static_cast<double>(n);
    if (!(var > 0.0)) {
      throw schema_error("ingest_csv: numeric column " + feature_names[c] + " is constant");
    }
    const double inv_sd = 1.0 / std::sqrt(var);
    for (std::size_t i = 0; i < n; ++i) x(i, c) = (x(i, c) - mean) * inv_sd;
  }

  IngestResult out;
  out.dataset.x = std::move(x);
  out.dataset.y = std::move(y);
  out.feature_names = std::move(feature_names);
  out.rows_read = rows_read;
  out.rows_kept = n;
  return out;
}

}  // namespace mgdm::data
