#include "quditsim/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <set>
#include <string>

namespace quditsim {

using json = nlohmann::json;

ExperimentKind parse_kind(std::string_view name) {
  if (name == "spectrum") return ExperimentKind::Spectrum;
  if (name == "vqe") return ExperimentKind::Vqe;
  if (name == "dqs") return ExperimentKind::Dqs;
  if (name == "truncation") return ExperimentKind::Truncation;
  if (name == "gates-check") return ExperimentKind::GatesCheck;
  throw ConfigError("unknown experiment kind '" + std::string(name) +
                    "' (expected spectrum, vqe, dqs, truncation or gates-check)");
}

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Spectrum:
      return "spectrum";
    case ExperimentKind::Vqe:
      return "vqe";
    case ExperimentKind::Dqs:
      return "dqs";
    case ExperimentKind::Truncation:
      return "truncation";
    case ExperimentKind::GatesCheck:
      return "gates-check";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Presets

namespace {

HardwareSpec cr_cu_dimer() {
  HardwareSpec hw;
  hw.S1 = 1.5;
  hw.s2 = 0.5;
  hw.g1 = 1.98;
  hw.g2 = 2.3;
  hw.D = 0.24;
  hw.Dprime = 0.0;
  hw.B = 0.4;
  return with_axial_dipolar_coupling(hw, 0.008);
}

ExperimentConfig base_dqs(std::string name, HardwareSpec hw, double G) {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::Dqs;
  cfg.preset = std::move(name);
  cfg.hardware = hw;
  cfg.rabi = RabiSpec{0.5, 1.0, G, spin_dim(hw.S1)};
  cfg.backend = Backend::Rwa;
  cfg.t2_us = {50.0, 10.0};
  return cfg;
}

}  // namespace

std::vector<PresetInfo> list_presets() {
  return {
      {"fig2", "VQE ground state, G/Omega in 0..1, S1=3/2 + s2=1/2 hardware, T2=10 us",
       "g1=1.98, g2=2.3, D=0.24 cm^-1, Jxy=0.008 cm^-1, B=0.4 T; omega_a=Omega/2; d=4"},
      {"fig3ab", "DQS G/Omega=0.25 on S1=3/2 + s2=1/2, N=4 (t<=5), N=6 (t>5), T2 in {50, 10} us",
       "g1=1.98, g2=2.3, D=0.24 cm^-1, B=0.4 T, Jxy=0.008 cm^-1"},
      {"fig3cd", "DQS G/Omega=0.5 on S1=3/2 + s2=1, N=7, T2 in {50, 10} us",
       "g1=1.98, g2=2.18, D=-D'=0.24 cm^-1, B=0.2 T, Jxy=0.008 cm^-1"},
      {"fig3ef", "DQS G/Omega=0.7 on S1=5/2 + s2=1, N=8, T2 in {50, 10} us",
       "g1=2, g2=2.18, D=-0.30 cm^-1, D'=-0.24 cm^-1, B=0.08 T, Jxy=0.008 cm^-1"},
      {"fig3gh", "Exact dynamics at G/Omega=0.7 truncated to d in {4, 6} against d_ref=30",
       "G/Omega=0.7, n_M in {3, 5}; d_ref=30 chosen as converged reference"},
  };
}

ExperimentConfig preset_config(std::string_view name) {
  if (name == "fig2") {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::Vqe;
    cfg.preset = "fig2";
    cfg.hardware = cr_cu_dimer();
    cfg.rabi = RabiSpec{0.5, 1.0, 0.0, 4};
    cfg.backend = Backend::Ideal;
    cfg.t2_us = {10.0};
    cfg.g_grid = parse_range("0:1:0.1");
    return cfg;
  }
  if (name == "fig3ab") {
    ExperimentConfig cfg = base_dqs("fig3ab", cr_cu_dimer(), 0.25);
    cfg.steps = 4;
    cfg.steps_after_split = 6;
    cfg.split_time = 5.0;
    return cfg;
  }
  if (name == "fig3cd") {
    HardwareSpec hw;
    hw.S1 = 1.5;
    hw.s2 = 1.0;
    hw.g1 = 1.98;
    hw.g2 = 2.18;
    hw.D = 0.24;
    hw.Dprime = -0.24;
    hw.B = 0.2;
    ExperimentConfig cfg = base_dqs("fig3cd", with_axial_dipolar_coupling(hw, 0.008), 0.5);
    cfg.steps = cfg.steps_after_split = 7;
    return cfg;
  }
  if (name == "fig3ef") {
    HardwareSpec hw;
    hw.S1 = 2.5;
    hw.s2 = 1.0;
    hw.g1 = 2.0;
    hw.g2 = 2.18;
    hw.D = -0.30;
    hw.Dprime = -0.24;
    hw.B = 0.08;
    ExperimentConfig cfg = base_dqs("fig3ef", with_axial_dipolar_coupling(hw, 0.008), 0.7);
    cfg.steps = cfg.steps_after_split = 8;
    return cfg;
  }
  if (name == "fig3gh") {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::Truncation;
    cfg.preset = "fig3gh";
    cfg.hardware = cr_cu_dimer();
    cfg.rabi = RabiSpec{0.5, 1.0, 0.7, 4};
    cfg.backend = Backend::Ideal;
    cfg.truncation = TruncationSettings{{4, 6}, 30};
    return cfg;
  }
  throw ConfigError("unknown preset '" + std::string(name) + "' (see list-presets)");
}

// ---------------------------------------------------------------------------
// Parsing helpers

namespace {

json number_json(double x) {
  if (std::isinf(x)) return x > 0 ? json("inf") : json("-inf");
  return json(x);
}

double as_number(const json& v, const std::string& path) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
  }
  if (!v.is_number()) throw ConfigError(path + ": expected a number");
  return v.get<double>();
}

long as_integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ConfigError(path + ": expected an integer");
  return v.get<long>();
}

bool as_bool(const json& v, const std::string& path) {
  if (!v.is_boolean()) throw ConfigError(path + ": expected true or false");
  return v.get<bool>();
}

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) throw ConfigError(path + ": expected a string");
  return v.get<std::string>();
}

std::vector<double> as_numbers(const json& v, const std::string& path) {
  if (!v.is_array()) throw ConfigError(path + ": expected an array of numbers");
  std::vector<double> out;
  for (size_t i = 0; i < v.size(); ++i) out.push_back(as_number(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<int> as_ints(const json& v, const std::string& path) {
  if (!v.is_array()) throw ConfigError(path + ": expected an array of integers");
  std::vector<int> out;
  for (size_t i = 0; i < v.size(); ++i) {
    out.push_back(static_cast<int>(as_integer(v[i], path + "[" + std::to_string(i) + "]")));
  }
  return out;
}

void check_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ConfigError(path + ": expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) throw ConfigError(path + "." + it.key() + ": unknown key");
  }
}

template <class F>
void with(const json& obj, const char* key, const std::string& path, F&& f) {
  if (obj.contains(key)) f(obj.at(key), path + "." + key);
}

void parse_hardware(const json& j, const std::string& path, HardwareSpec& hw) {
  check_keys(j, path,
             {"S1", "s2", "g1", "g2", "B_T", "D_cm", "Dprime_cm", "Jx_cm", "Jy_cm", "Jz_cm", "T2_qubit_us"});
  with(j, "S1", path, [&](const json& v, const std::string& p) { hw.S1 = as_number(v, p); });
  with(j, "s2", path, [&](const json& v, const std::string& p) { hw.s2 = as_number(v, p); });
  with(j, "g1", path, [&](const json& v, const std::string& p) { hw.g1 = as_number(v, p); });
  with(j, "g2", path, [&](const json& v, const std::string& p) { hw.g2 = as_number(v, p); });
  with(j, "B_T", path, [&](const json& v, const std::string& p) { hw.B = as_number(v, p); });
  with(j, "D_cm", path, [&](const json& v, const std::string& p) { hw.D = as_number(v, p); });
  with(j, "Dprime_cm", path, [&](const json& v, const std::string& p) { hw.Dprime = as_number(v, p); });
  with(j, "Jx_cm", path, [&](const json& v, const std::string& p) { hw.Jx = as_number(v, p); });
  with(j, "Jy_cm", path, [&](const json& v, const std::string& p) { hw.Jy = as_number(v, p); });
  with(j, "Jz_cm", path, [&](const json& v, const std::string& p) { hw.Jz = as_number(v, p); });
  with(j, "T2_qubit_us", path, [&](const json& v, const std::string& p) {
    if (v.is_null()) {
      hw.T2_qubit.reset();
    } else {
      hw.T2_qubit = as_number(v, p);
    }
  });
}

void parse_rabi(const json& j, const std::string& path, RabiSpec& r) {
  check_keys(j, path, {"omega_a", "Omega", "G", "d"});
  with(j, "omega_a", path, [&](const json& v, const std::string& p) { r.omega_a = as_number(v, p); });
  with(j, "Omega", path, [&](const json& v, const std::string& p) { r.Omega = as_number(v, p); });
  with(j, "G", path, [&](const json& v, const std::string& p) { r.G = as_number(v, p); });
  with(j, "d", path, [&](const json& v, const std::string& p) { r.d = static_cast<int>(as_integer(v, p)); });
}

EnvelopeShape parse_shape(const std::string& s, const std::string& path) {
  if (s == "gaussian") return EnvelopeShape::Gaussian;
  if (s == "rectangular") return EnvelopeShape::Rectangular;
  throw ConfigError(path + ": expected \"gaussian\" or \"rectangular\"");
}

DiagonalMode parse_diagonal_mode(const std::string& s, const std::string& path) {
  if (s == "virtual") return DiagonalMode::Virtual;
  if (s == "physical") return DiagonalMode::Physical;
  throw ConfigError(path + ": expected \"virtual\" or \"physical\"");
}

void parse_pulse(const json& j, const std::string& path, PulsePolicy& pol) {
  check_keys(j, path,
             {"selectivity_factor", "max_pulse_ns", "base_sigma_ns", "shape", "rwa_limit", "diagonal_mode",
              "stark_compensation", "steps_per_sigma"});
  with(j, "selectivity_factor", path,
       [&](const json& v, const std::string& p) { pol.selectivity_factor = as_number(v, p); });
  with(j, "max_pulse_ns", path, [&](const json& v, const std::string& p) { pol.max_pulse_ns = as_number(v, p); });
  with(j, "base_sigma_ns", path, [&](const json& v, const std::string& p) { pol.base_sigma_ns = as_number(v, p); });
  with(j, "shape", path, [&](const json& v, const std::string& p) { pol.shape = parse_shape(as_string(v, p), p); });
  with(j, "rwa_limit", path, [&](const json& v, const std::string& p) { pol.rwa_limit = as_number(v, p); });
  with(j, "diagonal_mode", path,
       [&](const json& v, const std::string& p) { pol.diagonal_mode = parse_diagonal_mode(as_string(v, p), p); });
  with(j, "stark_compensation", path,
       [&](const json& v, const std::string& p) { pol.stark_compensation = as_bool(v, p); });
  with(j, "steps_per_sigma", path,
       [&](const json& v, const std::string& p) { pol.steps_per_sigma = static_cast<int>(as_integer(v, p)); });
}

}  // namespace

ExperimentConfig parse_config(const json& doc) {
  const std::string root = "$";
  check_keys(doc, root,
             {"kind", "preset", "hardware", "rabi", "backend", "t2_us", "output_dir", "seed", "strict_factorization",
              "dqs", "vqe", "truncation", "pulse"});
  ExperimentConfig cfg;
  if (doc.contains("preset")) {
    const std::string name = as_string(doc.at("preset"), root + ".preset");
    if (!name.empty()) cfg = preset_config(name);
  } else if (!doc.contains("kind")) {
    throw ConfigError(root + ": either \"kind\" or \"preset\" is required");
  }
  with(doc, "kind", root, [&](const json& v, const std::string& p) {
    try {
      cfg.kind = parse_kind(as_string(v, p));
    } catch (const ConfigError& e) {
      throw ConfigError(p + ": " + e.what());
    }
  });
  with(doc, "hardware", root, [&](const json& v, const std::string& p) { parse_hardware(v, p, cfg.hardware); });
  with(doc, "rabi", root, [&](const json& v, const std::string& p) { parse_rabi(v, p, cfg.rabi); });
  with(doc, "backend", root, [&](const json& v, const std::string& p) {
    try {
      cfg.backend = parse_backend(as_string(v, p));
    } catch (const ConfigError& e) {
      throw ConfigError(p + ": " + e.what());
    }
  });
  with(doc, "t2_us", root, [&](const json& v, const std::string& p) { cfg.t2_us = as_numbers(v, p); });
  with(doc, "output_dir", root, [&](const json& v, const std::string& p) { cfg.output_dir = as_string(v, p); });
  with(doc, "seed", root, [&](const json& v, const std::string& p) {
    const long s = as_integer(v, p);
    if (s < 0) throw ConfigError(p + ": seed must be >= 0");
    cfg.seed = static_cast<std::uint64_t>(s);
  });
  with(doc, "strict_factorization", root,
       [&](const json& v, const std::string& p) { cfg.strict_factorization = as_bool(v, p); });
  with(doc, "dqs", root, [&](const json& j, const std::string& path) {
    check_keys(j, path, {"times", "steps", "steps_after_split", "split_time", "merge_rotations"});
    with(j, "times", path, [&](const json& v, const std::string& p) { cfg.times = as_numbers(v, p); });
    with(j, "steps", path, [&](const json& v, const std::string& p) { cfg.steps = static_cast<int>(as_integer(v, p)); });
    with(j, "steps_after_split", path,
         [&](const json& v, const std::string& p) { cfg.steps_after_split = static_cast<int>(as_integer(v, p)); });
    with(j, "split_time", path, [&](const json& v, const std::string& p) { cfg.split_time = as_number(v, p); });
    with(j, "merge_rotations", path,
         [&](const json& v, const std::string& p) { cfg.merge_rotations = as_bool(v, p); });
  });
  with(doc, "vqe", root, [&](const json& j, const std::string& path) {
    check_keys(j, path,
               {"g_grid", "shots", "random_restarts", "ansatz", "initial_step", "f_tolerance", "x_tolerance",
                "max_evaluations"});
    with(j, "ansatz", path, [&](const json& v, const std::string& p) {
      try {
        cfg.ansatz = parse_ansatz_variant(as_string(v, p));
      } catch (const ConfigError&) {
        throw ConfigError(p + ": expected \"x_conditioned\" or \"z_conditioned\"");
      }
    });
    with(j, "g_grid", path, [&](const json& v, const std::string& p) { cfg.g_grid = as_numbers(v, p); });
    with(j, "shots", path, [&](const json& v, const std::string& p) { cfg.shots = as_integer(v, p); });
    with(j, "random_restarts", path,
         [&](const json& v, const std::string& p) { cfg.random_restarts = static_cast<int>(as_integer(v, p)); });
    with(j, "initial_step", path,
         [&](const json& v, const std::string& p) { cfg.optimizer.initial_step = as_number(v, p); });
    with(j, "f_tolerance", path,
         [&](const json& v, const std::string& p) { cfg.optimizer.f_tolerance = as_number(v, p); });
    with(j, "x_tolerance", path,
         [&](const json& v, const std::string& p) { cfg.optimizer.x_tolerance = as_number(v, p); });
    with(j, "max_evaluations", path, [&](const json& v, const std::string& p) {
      cfg.optimizer.max_evaluations = static_cast<int>(as_integer(v, p));
    });
  });
  with(doc, "truncation", root, [&](const json& j, const std::string& path) {
    check_keys(j, path, {"d_values", "d_ref"});
    with(j, "d_values", path, [&](const json& v, const std::string& p) { cfg.truncation.d_values = as_ints(v, p); });
    with(j, "d_ref", path,
         [&](const json& v, const std::string& p) { cfg.truncation.d_ref = static_cast<int>(as_integer(v, p)); });
  });
  with(doc, "pulse", root, [&](const json& v, const std::string& p) { parse_pulse(v, p, cfg.policy); });
  validate(cfg);
  return cfg;
}

json to_json(const ExperimentConfig& cfg) {
  const HardwareSpec& hw = cfg.hardware;
  json t2 = json::array();
  for (double x : cfg.t2_us) t2.push_back(number_json(x));
  json times = json::array();
  for (double x : cfg.times) times.push_back(number_json(x));
  return {
      {"kind", to_string(cfg.kind)},
      {"preset", cfg.preset},
      {"hardware",
       {{"S1", hw.S1},
        {"s2", hw.s2},
        {"g1", hw.g1},
        {"g2", hw.g2},
        {"B_T", hw.B},
        {"D_cm", hw.D},
        {"Dprime_cm", hw.Dprime},
        {"Jx_cm", hw.Jx},
        {"Jy_cm", hw.Jy},
        {"Jz_cm", hw.Jz},
        {"T2_qubit_us", hw.T2_qubit ? number_json(*hw.T2_qubit) : json(nullptr)}}},
      {"rabi", {{"omega_a", cfg.rabi.omega_a}, {"Omega", cfg.rabi.Omega}, {"G", cfg.rabi.G}, {"d", cfg.rabi.d}}},
      {"backend", to_string(cfg.backend)},
      {"t2_us", t2},
      {"output_dir", cfg.output_dir},
      {"seed", cfg.seed},
      {"strict_factorization", cfg.strict_factorization},
      {"dqs",
       {{"times", times},
        {"steps", cfg.steps},
        {"steps_after_split", cfg.steps_after_split},
        {"split_time", number_json(cfg.split_time)},
        {"merge_rotations", cfg.merge_rotations}}},
      {"vqe",
       {{"g_grid", cfg.g_grid},
        {"shots", cfg.shots},
        {"random_restarts", cfg.random_restarts},
        {"ansatz", to_string(cfg.ansatz)},
        {"initial_step", cfg.optimizer.initial_step},
        {"f_tolerance", cfg.optimizer.f_tolerance},
        {"x_tolerance", cfg.optimizer.x_tolerance},
        {"max_evaluations", cfg.optimizer.max_evaluations}}},
      {"truncation", {{"d_values", cfg.truncation.d_values}, {"d_ref", cfg.truncation.d_ref}}},
      {"pulse",
       {{"selectivity_factor", cfg.policy.selectivity_factor},
        {"max_pulse_ns", cfg.policy.max_pulse_ns},
        {"base_sigma_ns", cfg.policy.base_sigma_ns},
        {"shape", cfg.policy.shape == EnvelopeShape::Gaussian ? "gaussian" : "rectangular"},
        {"rwa_limit", cfg.policy.rwa_limit},
        {"diagonal_mode", cfg.policy.diagonal_mode == DiagonalMode::Virtual ? "virtual" : "physical"},
        {"stark_compensation", cfg.policy.stark_compensation},
        {"steps_per_sigma", cfg.policy.steps_per_sigma}}},
  };
}

void validate(const ExperimentConfig& cfg) {
  validate(cfg.hardware);
  validate(cfg.rabi);
  validate(cfg.policy);
  if (cfg.t2_us.empty()) throw ConfigError("t2_us: list is empty");
  for (double t2 : cfg.t2_us) {
    if (!(t2 > 0.0)) throw ConfigError("t2_us: values must be positive");
  }
  if (cfg.output_dir.empty()) throw ConfigError("output_dir: must not be empty");
  switch (cfg.kind) {
    case ExperimentKind::Dqs:
      make_dqs_config(cfg);
      if (cfg.rabi.d != spin_dim(cfg.hardware.S1)) {
        throw ConfigError("rabi.d: must equal 2 S1 + 1 = " + std::to_string(spin_dim(cfg.hardware.S1)));
      }
      break;
    case ExperimentKind::Vqe:
      validate(make_vqe_config(cfg));
      break;
    case ExperimentKind::Truncation:
      if (cfg.times.empty()) throw ConfigError("dqs.times: grid is empty");
      if (cfg.truncation.d_values.empty()) throw ConfigError("truncation.d_values: list is empty");
      for (int d : cfg.truncation.d_values) {
        if (d < 2 || d >= cfg.truncation.d_ref) {
          throw ConfigError("truncation.d_values: each d must satisfy 2 <= d < d_ref");
        }
      }
      break;
    case ExperimentKind::Spectrum:
    case ExperimentKind::GatesCheck:
      break;
  }
}

DqsConfig make_dqs_config(const ExperimentConfig& cfg) {
  DqsConfig d;
  d.name = cfg.preset.empty() ? "dqs" : cfg.preset;
  d.hardware = cfg.hardware;
  d.rabi = cfg.rabi;
  d.times = cfg.times;
  d.steps = cfg.steps;
  d.steps_after_split = cfg.steps_after_split;
  d.split_time = cfg.split_time;
  d.merge_rotations = cfg.merge_rotations;
  d.backend = cfg.backend;
  d.t2_us = cfg.t2_us;
  d.policy = cfg.policy;
  validate(d);
  return d;
}

VqeConfig make_vqe_config(const ExperimentConfig& cfg) {
  VqeConfig v;
  v.hardware = cfg.hardware;
  v.hardware.T2 = cfg.t2_us.front();
  v.rabi = cfg.rabi;
  v.g_grid = cfg.g_grid;
  v.backend = cfg.backend;
  v.optimizer = cfg.optimizer;
  v.random_restarts = cfg.random_restarts;
  v.seed = cfg.seed;
  v.shots = cfg.shots;
  v.ansatz = cfg.ansatz;
  v.policy = cfg.policy;
  return v;
}

std::vector<double> parse_list(std::string_view text) {
  std::vector<double> out;
  size_t pos = 0;
  while (pos <= text.size()) {
    const size_t comma = text.find(',', pos);
    std::string_view item = text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos);
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.front()))) item.remove_prefix(1);
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back()))) item.remove_suffix(1);
    if (item == "inf") {
      out.push_back(std::numeric_limits<double>::infinity());
    } else {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
      if (ec != std::errc() || ptr != item.data() + item.size() || item.empty()) {
        throw ConfigError("cannot parse number '" + std::string(item) + "'");
      }
      out.push_back(v);
    }
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::vector<double> parse_range(std::string_view text) {
  std::vector<double> parts;
  size_t pos = 0;
  for (int i = 0; i < 3; ++i) {
    const size_t colon = text.find(':', pos);
    if ((i < 2) == (colon == std::string_view::npos)) {
      throw ConfigError("range '" + std::string(text) + "' must have the form start:stop:step");
    }
    const std::string_view item = text.substr(pos, i < 2 ? colon - pos : text.npos);
    const auto v = parse_list(item);
    if (v.size() != 1) throw ConfigError("bad range component '" + std::string(item) + "'");
    parts.push_back(v.front());
    pos = colon + 1;
  }
  const double a = parts[0];
  const double b = parts[1];
  const double step = parts[2];
  if (!(step > 0.0) || b < a) throw ConfigError("range '" + std::string(text) + "' needs step > 0 and stop >= start");
  std::vector<double> out;
  for (long k = 0;; ++k) {
    const double x = a + k * step;
    if (x > b + 1e-9 * step) break;
    out.push_back(std::round(x * 1e12) / 1e12);
  }
  return out;
}

}  // namespace quditsim
