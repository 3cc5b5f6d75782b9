#include "mgdm/outputs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "mgdm/errors.hpp"

namespace mgdm::harness {

namespace {

constexpr const char* kVersion = "0.1.0";

using ordered_json = nlohmann::ordered_json;

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("emit_outputs: cannot open " + path.string());
  out << content;
  out.flush();
  if (!out) throw io_error("emit_outputs: write failure on " + path.string());
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

ordered_json spec_to_json(const ExperimentSpec& spec) {
  ordered_json j;
  j["kind"] = kind_name(spec.kind);
  j["sim"] = {{"N", spec.sim.num_obs},
              {"p", spec.sim.dim},
              {"kappa", spec.sim.kappa},
              {"sigma", spec.sim.sigma}};
  j["grid"] = ordered_json::array();
  for (const auto& [a, g] : spec.grid) j["grid"].push_back({a, g});
  j["gamma_grid"] = spec.gamma_grid;
  j["alpha_grid"] = spec.alpha_grid;
  j["kappas"] = spec.kappas;
  j["replications"] = spec.replications;
  j["epochs"] = spec.epochs;
  j["batch_size"] = spec.batch_size;
  j["batch_count"] = spec.batch_count;
  j["seed"] = spec.master_seed;
  j["full_scale"] = spec.full_scale;
  if (spec.kind == ExperimentKind::ingest) {
    j["csv_path"] = spec.csv_path;
    j["response"] = spec.response_column;
    j["schema"] = ordered_json::array();
    for (const auto& col : spec.schema) {
      ordered_json c;
      c["name"] = col.name;
      c["kind"] = col.kind == data::ColumnKind::numeric ? "numeric" : "categorical";
      if (col.kind == data::ColumnKind::categorical) c["top_k"] = col.top_k;
      j["schema"].push_back(c);
    }
  }
  return j;
}

// ---- plot.svg -------------------------------------------------------------

struct Extent {
  double lo = 0.0;
  double hi = 1.0;
};

Extent padded(double lo, double hi) {
  if (!(hi > lo)) {
    hi = lo + 1.0;
    lo -= 1.0;
  }
  const double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad};
}

class SvgCanvas {
 public:
  SvgCanvas(double width, double height) : width_(width), height_(height) {
    os_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_ << "\" height=\""
        << height_ << "\" viewBox=\"0 0 " << width_ << " " << height_ << "\">\n";
    os_ << "<rect width=\"" << width_ << "\" height=\"" << height_ << "\" fill=\"white\"/>\n";
  }

  void line(double x1, double y1, double x2, double y2, const std::string& color,
            double stroke = 1.0) {
    os_ << "<line x1=\"" << fmt(x1) << "\" y1=\"" << fmt(y1) << "\" x2=\"" << fmt(x2)
        << "\" y2=\"" << fmt(y2) << "\" stroke=\"" << color << "\" stroke-width=\"" << stroke
        << "\"/>\n";
  }

  void rect(double x, double y, double w, double h, const std::string& fill,
            const std::string& stroke) {
    os_ << "<rect x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" width=\"" << fmt(w)
        << "\" height=\"" << fmt(h) << "\" fill=\"" << fill << "\" stroke=\"" << stroke
        << "\"/>\n";
  }

  void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& color) {
    os_ << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& [x, y] : pts) os_ << fmt(x) << "," << fmt(y) << " ";
    os_ << "\"/>\n";
  }

  void text(double x, double y, const std::string& s, const std::string& color = "black",
            int size = 11) {
    os_ << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" font-family=\"sans-serif\" "
        << "font-size=\"" << size << "\" fill=\"" << color << "\">" << s << "</text>\n";
  }

  std::string finish() {
    os_ << "</svg>\n";
    return os_.str();
  }

 private:
  static std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
  }
  double width_;
  double height_;
  std::ostringstream os_;
};

const std::vector<std::string> kPalette = {"#c0392b", "#2980b9", "#27ae60",
                                           "#8e44ad", "#d35400", "#16a085"};

struct Frame {
  double x0 = 60.0, y0 = 20.0, x1 = 620.0, y1 = 380.0;
  Extent ex, ey;
  double map_x(double v) const { return x0 + (v - ex.lo) / (ex.hi - ex.lo) * (x1 - x0); }
  double map_y(double v) const { return y1 - (v - ey.lo) / (ey.hi - ey.lo) * (y1 - y0); }
};

void draw_axes(SvgCanvas& svg, const Frame& f) {
  svg.line(f.x0, f.y1, f.x1, f.y1, "black");
  svg.line(f.x0, f.y0, f.x0, f.y1, "black");
  svg.text(f.x0 - 52, f.y0 + 4, format_double(f.ey.hi).substr(0, 8), "black", 10);
  svg.text(f.x0 - 52, f.y1 + 4, format_double(f.ey.lo).substr(0, 8), "black", 10);
}

/// Polyline chart: one series per (method, param), x = index, y = log10(value)
/// for delta curves, raw value otherwise.
std::string render_lines(const SummaryTable& table, const std::string& stat, bool log10_y) {
  std::map<std::string, std::vector<std::pair<double, double>>> series;
  for (const auto& row : table.rows) {
    if (row.stat != stat) continue;
    double y = row.value;
    if (log10_y) y = std::log10(std::max(row.value, 1e-300));
    series[row.method + " " + row.param].push_back({static_cast<double>(row.index), y});
  }
  if (series.empty()) return {};

  Frame f;
  double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
  for (auto& [name, pts] : series) {
    std::sort(pts.begin(), pts.end());
    for (const auto& [x, y] : pts) {
      xlo = std::min(xlo, x);
      xhi = std::max(xhi, x);
      ylo = std::min(ylo, y);
      yhi = std::max(yhi, y);
    }
  }
  f.ex = padded(xlo, xhi);
  f.ey = padded(ylo, yhi);

  SvgCanvas svg(640, 420);
  draw_axes(svg, f);
  std::size_t ci = 0;
  double legend_y = f.y0 + 12;
  for (const auto& [name, pts] : series) {
    const std::string& color = kPalette[ci++ % kPalette.size()];
    std::vector<std::pair<double, double>> mapped;
    mapped.reserve(pts.size());
    for (const auto& [x, y] : pts) mapped.push_back({f.map_x(x), f.map_y(y)});
    svg.polyline(mapped, color);
    svg.text(f.x0 + 8, legend_y, name, color);
    legend_y += 14;
  }
  return svg.finish();
}

/// Box chart of per-replication samples grouped by (method, param).
std::string render_boxes(const SummaryTable& table, const std::string& stat) {
  std::map<std::string, std::vector<double>> groups;
  for (const auto& row : table.rows) {
    if (row.stat != stat) continue;
    groups[row.method + " " + row.param].push_back(row.value);
  }
  if (groups.empty()) return {};

  double ylo = 1e300, yhi = -1e300;
  for (auto& [name, vals] : groups) {
    std::sort(vals.begin(), vals.end());
    ylo = std::min(ylo, vals.front());
    yhi = std::max(yhi, vals.back());
  }
  Frame f;
  f.ey = padded(ylo, yhi);
  f.ex = {0.0, static_cast<double>(groups.size())};

  SvgCanvas svg(640, 420);
  draw_axes(svg, f);
  const auto quantile = [](const std::vector<double>& sorted, double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
  };
  std::size_t gi = 0;
  for (const auto& [name, vals] : groups) {
    const double cx = f.map_x(static_cast<double>(gi) + 0.5);
    const double w = 0.6 * (f.x1 - f.x0) / static_cast<double>(groups.size());
    const double q1 = quantile(vals, 0.25);
    const double q2 = quantile(vals, 0.5);
    const double q3 = quantile(vals, 0.75);
    const std::string& color = kPalette[gi % kPalette.size()];
    svg.line(cx, f.map_y(vals.front()), cx, f.map_y(q1), color);
    svg.line(cx, f.map_y(q3), cx, f.map_y(vals.back()), color);
    svg.rect(cx - w / 2, f.map_y(q3), w, f.map_y(q1) - f.map_y(q3), "none", color);
    svg.line(cx - w / 2, f.map_y(q2), cx + w / 2, f.map_y(q2), color, 2.0);
    svg.text(cx - w / 2, f.y1 + 14, name.substr(0, 24), color, 9);
    ++gi;
  }
  return svg.finish();
}

std::string render_svg(const ExperimentSpec& spec, const SummaryTable& table) {
  switch (spec.kind) {
    case ExperimentKind::converge:
      return render_lines(table, "median_delta", true);
    case ExperimentKind::dgamma_curve:
      return render_lines(table, "d_gamma", false);
    case ExperimentKind::stable_ee:
    case ExperimentKind::compare:
      return render_boxes(table, "log_ee");
    case ExperimentKind::tune:
    case ExperimentKind::ingest:
      return {};
  }
  return {};
}

}  // namespace

std::string format_double(double value) {
  char buf[40];
  if (value == std::floor(value) && std::abs(value) < 1e15) {
    std::snprintf(buf, sizeof(buf), "%.0f", value);
    return buf;
  }
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof(buf), "%.*g", precision, value);
    if (std::strtod(buf, nullptr) == value) return buf;
  }
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void emit_outputs(const ExperimentSpec& spec, const ExperimentResult& result,
                  const std::string& dir, const OutputFormats& formats) {
  if (result.table.rows.empty()) throw empty_data("emit_outputs: empty summary table");

  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw io_error("emit_outputs: cannot create " + dir + ": " + ec.message());
  const std::filesystem::path base(dir);

  if (formats.csv) {
    std::ostringstream csv;
    csv << "kind,method,param,index,stat,value\n";
    for (const auto& row : result.table.rows) {
      csv << csv_escape(row.kind) << ',' << csv_escape(row.method) << ','
          << csv_escape(row.param) << ',' << row.index << ',' << csv_escape(row.stat) << ','
          << format_double(row.value) << '\n';
    }
    write_file(base / "summary.csv", csv.str());
  }

  if (formats.manifest) {
    ordered_json manifest;
    manifest["kind"] = kind_name(spec.kind);
    manifest["version"] = kVersion;
    manifest["master_seed"] = spec.master_seed;
    manifest["spec"] = spec_to_json(spec);
    manifest["replication_seeds"] = result.replication_seeds;
    manifest["skipped"] = ordered_json::array();
    for (const auto& s : result.skipped) {
      manifest["skipped"].push_back({{"param", s.param}, {"verdict", s.verdict}});
    }
    manifest["row_count"] = result.table.rows.size();
    write_file(base / "manifest.json", manifest.dump(2) + "\n");
  }

  if (formats.svg) {
    const std::string svg = render_svg(spec, result.table);
    if (!svg.empty()) write_file(base / "plot.svg", svg);
  }
}

}  // namespace mgdm::harness
