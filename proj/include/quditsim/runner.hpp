#pragma once

#include "quditsim/config.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <vector>

namespace quditsim {

struct RunOutput {
  nlohmann::json summary;
  std::vector<std::filesystem::path> files;
  bool checks_passed = true;  // gates-check only
};

/// Throws PhysicsError when the labeled eigenstates are far from product
/// states and `strict` is set; otherwise returns the warning flag.
bool check_factorization(const SpinSystem& sys, bool strict);

/// Runs one experiment and writes its tables and summary.json into
/// cfg.output_dir (each file written atomically).
RunOutput run_experiment(const ExperimentConfig& cfg);

}  // namespace quditsim
