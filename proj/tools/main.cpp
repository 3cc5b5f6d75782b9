#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "mgdm/errors.hpp"
#include "mgdm/experiment.hpp"
#include "mgdm/outputs.hpp"

namespace {

using json = nlohmann::json;
using mgdm::harness::ExperimentKind;
using mgdm::harness::ExperimentSpec;

ExperimentKind kind_from_name(const std::string& name) {
  if (name == "converge") return ExperimentKind::converge;
  if (name == "stable-ee") return ExperimentKind::stable_ee;
  if (name == "dgamma") return ExperimentKind::dgamma_curve;
  if (name == "compare") return ExperimentKind::compare;
  if (name == "tune") return ExperimentKind::tune;
  if (name == "ingest") return ExperimentKind::ingest;
  throw mgdm::invalid_input("unknown experiment kind: " + name);
}

void apply_defaults(ExperimentSpec& spec) {
  spec.sim.num_obs = 5000;
  spec.sim.dim = 50;
  spec.sim.kappa = 1.0;
  spec.sim.sigma = 1.0;
  spec.replications = 25;
  spec.batch_size = 500;
  spec.batch_count = 10;
  switch (spec.kind) {
    case ExperimentKind::converge:
      spec.epochs = 30;
      spec.kappas = {1.0, 2.0, 3.0};
      break;
    case ExperimentKind::stable_ee:
      spec.epochs = 1;
      for (double a : {0.15, 0.1, 0.05, 0.01, 0.001}) spec.grid.push_back({a, 0.5});
      for (double g : {0.0, 0.8, 1.0, 2.0, 5.0, 10.0}) spec.grid.push_back({0.1, g});
      break;
    case ExperimentKind::dgamma_curve:
      spec.gamma_grid.clear();
      for (int i = 0; i <= 200; ++i) spec.gamma_grid.push_back(0.05 * i);
      break;
    case ExperimentKind::compare:
      spec.epochs = 50;
      for (double a : {0.04, 0.02, 0.01}) spec.grid.push_back({a, 0.9});
      break;
    case ExperimentKind::tune:
      spec.kappas = {1.0, 2.0, 3.0};
      break;
    case ExperimentKind::ingest:
      break;
  }
}

void require_keys(const json& j, std::initializer_list<const char*> allowed,
                  const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* name : allowed) {
      if (key == name) {
        ok = true;
        break;
      }
    }
    if (!ok) throw mgdm::invalid_input("config: unknown key '" + key + "' in " + where);
  }
}

ExperimentSpec load_spec(ExperimentKind kind, const std::string& config_path) {
  std::ifstream in(config_path);
  if (!in) throw mgdm::io_error("cannot open config file " + config_path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw mgdm::invalid_input(std::string("config: JSON parse error: ") + e.what());
  }

  ExperimentSpec spec;
  spec.kind = kind;
  apply_defaults(spec);

  require_keys(j,
               {"kind", "sim", "grid", "gamma_grid", "alpha_grid", "kappas", "replications",
                "epochs", "batch_size", "batch_count", "seed", "out_dir", "full_scale",
                "csv_path", "schema", "response"},
               "top level");
  if (j.contains("kind") && kind_from_name(j["kind"].get<std::string>()) != kind) {
    throw mgdm::invalid_input("config: kind does not match the subcommand");
  }
  if (j.contains("sim")) {
    const json& s = j["sim"];
    require_keys(s, {"N", "p", "kappa", "sigma"}, "sim");
    if (s.contains("N")) spec.sim.num_obs = s["N"].get<std::size_t>();
    if (s.contains("p")) spec.sim.dim = s["p"].get<std::size_t>();
    if (s.contains("kappa")) spec.sim.kappa = s["kappa"].get<double>();
    if (s.contains("sigma")) spec.sim.sigma = s["sigma"].get<double>();
  }
  if (j.contains("grid")) {
    spec.grid.clear();
    for (const auto& point : j["grid"]) {
      if (!point.is_array() || point.size() != 2) {
        throw mgdm::invalid_input("config: grid entries must be [alpha, gamma] pairs");
      }
      spec.grid.push_back({point[0].get<double>(), point[1].get<double>()});
    }
  }
  if (j.contains("gamma_grid")) spec.gamma_grid = j["gamma_grid"].get<std::vector<double>>();
  if (j.contains("alpha_grid")) spec.alpha_grid = j["alpha_grid"].get<std::vector<double>>();
  if (j.contains("kappas")) spec.kappas = j["kappas"].get<std::vector<double>>();
  if (j.contains("replications")) spec.replications = j["replications"].get<std::size_t>();
  if (j.contains("epochs")) spec.epochs = j["epochs"].get<std::size_t>();
  if (j.contains("batch_size")) spec.batch_size = j["batch_size"].get<std::size_t>();
  if (j.contains("batch_count")) spec.batch_count = j["batch_count"].get<std::size_t>();
  if (j.contains("seed")) spec.master_seed = j["seed"].get<std::uint64_t>();
  if (j.contains("out_dir")) spec.out_dir = j["out_dir"].get<std::string>();
  if (j.contains("full_scale")) spec.full_scale = j["full_scale"].get<bool>();
  if (j.contains("csv_path")) spec.csv_path = j["csv_path"].get<std::string>();
  if (j.contains("response")) spec.response_column = j["response"].get<std::string>();
  if (j.contains("schema")) {
    spec.schema.clear();
    for (const auto& col : j["schema"]) {
      require_keys(col, {"name", "kind", "top_k"}, "schema entry");
      mgdm::data::ColumnSpec cs;
      cs.name = col.at("name").get<std::string>();
      const std::string kind_str = col.at("kind").get<std::string>();
      if (kind_str == "numeric") {
        cs.kind = mgdm::data::ColumnKind::numeric;
      } else if (kind_str == "categorical") {
        cs.kind = mgdm::data::ColumnKind::categorical;
        cs.top_k = col.at("top_k").get<std::size_t>();
      } else {
        throw mgdm::invalid_input("config: column kind must be numeric or categorical");
      }
      spec.schema.push_back(cs);
    }
  }
  if (kind == ExperimentKind::ingest) {
    if (spec.csv_path.empty() || spec.schema.empty() || spec.response_column.empty()) {
      throw mgdm::invalid_input("config: ingest needs csv_path, schema and response");
    }
  }
  return spec;
}

int run(ExperimentKind kind, const std::string& config_path,
        const std::optional<std::string>& out_dir, const std::optional<std::uint64_t>& seed,
        const std::optional<std::size_t>& reps, bool full_scale) {
  ExperimentSpec spec = load_spec(kind, config_path);
  if (out_dir) spec.out_dir = *out_dir;
  if (seed) spec.master_seed = *seed;
  if (full_scale) spec.full_scale = true;
  if (spec.full_scale) spec.replications = 100;
  if (reps) spec.replications = *reps;

  const auto result = mgdm::harness::run_experiment(spec);
  mgdm::harness::emit_outputs(spec, result, spec.out_dir);
  std::cout << mgdm::harness::kind_name(kind) << ": wrote " << result.table.rows.size()
            << " rows to " << spec.out_dir << "\n";
  for (const auto& s : result.skipped) {
    std::cout << "skipped " << s.param << " (" << s.verdict << ")\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minibatch gradient descent with momentum: experiment harness"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> reps;
  bool full_scale = false;

  const std::vector<std::string> kinds = {"converge", "stable-ee", "dgamma",
                                          "compare", "tune", "ingest"};
  for (const auto& name : kinds) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON experiment config")->required();
    sub->add_option("--out", out_dir, "output directory (overrides config)");
    sub->add_option("--seed", seed, "master seed (overrides config)");
    sub->add_option("--reps", reps, "replication count (overrides config)");
    sub->add_flag("--full-scale", full_scale, "paper-scale replication counts");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    const std::string sub = app.get_subcommands().front()->get_name();
    return run(kind_from_name(sub), config_path, out_dir, seed, reps, full_scale);
  } catch (const mgdm::io_error& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return 4;
  } catch (const mgdm::numerical_failure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const mgdm::singular_matrix& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const mgdm::invalid_input& e) {
    std::cerr << "invalid spec: " << e.what() << "\n";
    return 2;
  } catch (const mgdm::schema_error& e) {
    std::cerr << "invalid spec: " << e.what() << "\n";
    return 2;
  } catch (const mgdm::empty_data& e) {
    std::cerr << "invalid spec: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
