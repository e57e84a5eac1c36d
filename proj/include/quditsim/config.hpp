#pragma once

#include "quditsim/experiments.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace quditsim {

enum class ExperimentKind { Spectrum, Vqe, Dqs, Truncation, GatesCheck };

ExperimentKind parse_kind(std::string_view name);
std::string to_string(ExperimentKind kind);

struct TruncationSettings {
  std::vector<int> d_values{4, 6};
  int d_ref = 30;
};

/// Everything one CLI invocation needs. Hardware energies in cm^-1, field in
/// tesla, T2 in microseconds, target parameters in units of Omega.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Spectrum;
  std::string preset;
  HardwareSpec hardware;
  RabiSpec rabi;
  Backend backend = Backend::Rwa;
  std::vector<double> t2_us{kInfiniteT2};
  std::string output_dir = "results";
  std::uint64_t seed = 1;
  bool strict_factorization = false;

  // dqs and truncation
  std::vector<double> times = default_time_grid();
  int steps = 4;
  int steps_after_split = 4;
  double split_time = std::numeric_limits<double>::infinity();
  bool merge_rotations = true;

  // vqe
  std::vector<double> g_grid{0.6};
  long shots = 0;
  int random_restarts = 3;
  AnsatzVariant ansatz = AnsatzVariant::XConditioned;
  NelderMeadOptions optimizer;

  TruncationSettings truncation;
  PulsePolicy policy;
};

struct PresetInfo {
  std::string name;
  std::string description;
  std::string parameters;
};

std::vector<PresetInfo> list_presets();
/// Throws ConfigError for unknown names.
ExperimentConfig preset_config(std::string_view name);

/// Strict parse: unknown keys, wrong types and invalid values raise
/// ConfigError with the offending JSON path. Keys absent from the document
/// keep the values of `base` (or of the preset named in the document).
ExperimentConfig parse_config(const nlohmann::json& doc);
nlohmann::json to_json(const ExperimentConfig& cfg);

void validate(const ExperimentConfig& cfg);

DqsConfig make_dqs_config(const ExperimentConfig& cfg);
VqeConfig make_vqe_config(const ExperimentConfig& cfg);

/// "a:b:step" inclusive grid (tolerant to rounding at the end point).
std::vector<double> parse_range(std::string_view text);
/// Comma-separated numbers; "inf" allowed.
std::vector<double> parse_list(std::string_view text);

}  // namespace quditsim
