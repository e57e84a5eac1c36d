#include "quditsim/config.hpp"
#include "quditsim/runner.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

namespace {

using namespace quditsim;

constexpr int kExitConfig = 2;
constexpr int kExitPhysics = 3;
constexpr int kExitScheduling = 4;

struct RunArgs {
  std::string kind;
  std::string config_path;
  std::string preset;
  std::string backend;
  std::string t2;
  std::string g_range;
  std::string out;
  std::optional<long> seed;
  bool strict = false;
};

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
}

ExperimentConfig build_config(const RunArgs& args) {
  nlohmann::json doc = args.config_path.empty() ? nlohmann::json::object() : read_json(args.config_path);
  if (!args.preset.empty()) {
    if (doc.contains("preset") && doc["preset"] != args.preset) {
      throw ConfigError("--preset " + args.preset + " conflicts with the config file preset");
    }
    doc["preset"] = args.preset;
  }
  if (!args.kind.empty()) doc["kind"] = args.kind;
  ExperimentConfig cfg = parse_config(doc);
  if (!args.backend.empty()) cfg.backend = parse_backend(args.backend);
  if (!args.t2.empty()) cfg.t2_us = parse_list(args.t2);
  if (!args.g_range.empty()) {
    cfg.g_grid = args.g_range.find(':') == std::string::npos ? parse_list(args.g_range) : parse_range(args.g_range);
  }
  if (args.seed) {
    if (*args.seed < 0) throw ConfigError("--seed must be >= 0");
    cfg.seed = static_cast<std::uint64_t>(*args.seed);
  }
  if (args.strict) cfg.strict_factorization = true;
  if (!args.out.empty()) {
    cfg.output_dir = args.out;
  } else if (const char* env = std::getenv("QUDITSIM_OUT"); env != nullptr && *env != '\0') {
    cfg.output_dir = std::string(env) + "/" + to_string(cfg.kind) + (cfg.preset.empty() ? "" : "-" + cfg.preset);
  } else if (!doc.contains("output_dir")) {
    cfg.output_dir = "results/" + to_string(cfg.kind) + (cfg.preset.empty() ? "" : "-" + cfg.preset);
  }
  validate(cfg);
  return cfg;
}

int run(const RunArgs& args) {
  const std::string where = args.config_path.empty() ? "" : args.config_path + ": ";
  try {
    const ExperimentConfig cfg = build_config(args);
    const RunOutput out = run_experiment(cfg);
    for (const auto& f : out.files) std::cout << f.string() << "\n";
    if (out.summary.contains("factorization_warning") && out.summary["factorization_warning"].get<bool>()) {
      std::cerr << "warning: hardware eigenstates are not close to product states\n";
    }
    if (!out.checks_passed) {
      std::cerr << where << "gates-check failed (see gates_check.json)\n";
      return kExitPhysics;
    }
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << where << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const PhysicsError& e) {
    std::cerr << where << "physics check failed: " << e.what() << "\n";
    return kExitPhysics;
  } catch (const SchedulingError& e) {
    std::cerr << where << "scheduling failed: " << e.what() << "\n";
    return kExitScheduling;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spin-qudit simulator for the quantum Rabi model"};
  app.require_subcommand(1);

  RunArgs args;
  auto* run_cmd = app.add_subcommand("run", "Run an experiment and write result tables");
  run_cmd->add_option("kind", args.kind, "spectrum, vqe, dqs, truncation or gates-check");
  run_cmd->add_option("--config", args.config_path, "JSON experiment config")->check(CLI::ExistingFile);
  run_cmd->add_option("--preset", args.preset, "Named preset (see list-presets)");
  run_cmd->add_option("--backend", args.backend, "lab, rwa or ideal");
  run_cmd->add_option("--t2", args.t2, "Comma-separated T2 values in microseconds (inf allowed)");
  run_cmd->add_option("--g", args.g_range, "G values for vqe: start:stop:step or a comma-separated list");
  run_cmd->add_option("--seed", args.seed, "Random seed");
  run_cmd->add_option("--out", args.out, "Output directory (default $QUDITSIM_OUT or ./results)");
  run_cmd->add_flag("--strict-factorization", args.strict, "Fail when eigenstates are not product-like");

  auto* list_cmd = app.add_subcommand("list-presets", "Show the built-in presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (*list_cmd) {
    for (const auto& p : list_presets()) {
      std::cout << p.name << "\n  " << p.description << "\n  parameters: " << p.parameters << "\n";
    }
    return 0;
  }
  return run(args);
}
