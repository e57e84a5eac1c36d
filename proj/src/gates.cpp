#include "quditsim/gates.hpp"

#include <cmath>
#include <sstream>

namespace quditsim {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_pair_level(int level, const EncodingMap& map) {
  if (level < 0 || level + 1 >= map.d()) {
    throw ConfigError("gate: qudit pair (" + std::to_string(level) + ", " +
                      std::to_string(level + 1) + ") outside the encoded levels");
  }
}

const char* axis_name(Axis a) { return a == Axis::X ? "x" : "y"; }

}  // namespace

double axis_phase(Axis axis) { return axis == Axis::X ? 0.0 : 0.5 * kPi; }

std::vector<PairRotation> pair_rotations(const Gate& gate, const EncodingMap& map) {
  return std::visit(
      Overloaded{
          [&](const QubitRot& g) {
            std::vector<PairRotation> out;
            for (int n = 0; n < map.d(); ++n) {
              out.push_back({map.hardware_index(n, true), map.hardware_index(n, false), g.angle,
                             axis_phase(g.axis)});
            }
            return out;
          },
          [&](const QuditPairRot& g) {
            check_pair_level(g.level, map);
            std::vector<PairRotation> out;
            for (bool up : {true, false}) {
              out.push_back({map.hardware_index(g.level + 1, up), map.hardware_index(g.level, up),
                             g.angle, axis_phase(g.axis)});
            }
            return out;
          },
          [&](const CondQuditPairRot& g) {
            check_pair_level(g.level, map);
            std::vector<PairRotation> out;
            for (bool up : {true, false}) {
              out.push_back({map.hardware_index(g.level + 1, up), map.hardware_index(g.level, up),
                             up ? g.angle : -g.angle, axis_phase(g.axis)});
            }
            return out;
          },
          [&](const DiagonalPhase&) { return std::vector<PairRotation>{}; },
      },
      gate);
}

ComplexMatrix pair_rotation_unitary(const PairRotation& rot, int dim) {
  ComplexMatrix u = identity(dim);
  const double c = std::cos(0.5 * rot.theta);
  const double s = std::sin(0.5 * rot.theta);
  u(rot.upper, rot.upper) = c;
  u(rot.lower, rot.lower) = c;
  u(rot.upper, rot.lower) = -kI * s * std::polar(1.0, -rot.phi);
  u(rot.lower, rot.upper) = -kI * s * std::polar(1.0, rot.phi);
  return u;
}

ComplexMatrix gate_unitary(const Gate& gate, const EncodingMap& map) {
  const int dim = map.hardware_dim();
  if (const auto* diag = std::get_if<DiagonalPhase>(&gate)) {
    if (static_cast<int>(diag->phases.size()) != dim) {
      throw ConfigError("DiagonalPhase: expected one phase per hardware level");
    }
    ComplexMatrix u = ComplexMatrix::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) u(k, k) = std::polar(1.0, -diag->phases[k]);
    return u;
  }
  ComplexMatrix u = identity(dim);
  for (const auto& rot : pair_rotations(gate, map)) u = pair_rotation_unitary(rot, dim) * u;
  return u;
}

ComplexMatrix circuit_unitary(const Circuit& gates, const EncodingMap& map) {
  ComplexMatrix u = identity(map.hardware_dim());
  for (const auto& g : gates) u = gate_unitary(g, map) * u;
  return u;
}

bool is_diagonal(const Gate& gate) { return std::holds_alternative<DiagonalPhase>(gate); }

std::string describe(const Gate& gate) {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const QubitRot& g) { os << "QubitRot(" << axis_name(g.axis) << ", " << g.angle << ")"; },
                 [&](const QuditPairRot& g) {
                   os << "QuditPairRot(" << g.level << "<->" << g.level + 1 << ", " << axis_name(g.axis)
                      << ", " << g.angle << ")";
                 },
                 [&](const CondQuditPairRot& g) {
                   os << "CondQuditPairRot(" << g.level << "<->" << g.level + 1 << ", "
                      << axis_name(g.axis) << ", " << g.angle << ")";
                 },
                 [&](const DiagonalPhase& g) { os << "DiagonalPhase[" << g.phases.size() << "]"; },
             },
             gate);
  return os.str();
}

AnsatzVariant parse_ansatz_variant(std::string_view name) {
  if (name == "x_conditioned") return AnsatzVariant::XConditioned;
  if (name == "z_conditioned") return AnsatzVariant::ZConditioned;
  throw ConfigError("unknown ansatz '" + std::string(name) + "' (expected x_conditioned or z_conditioned)");
}

std::string to_string(AnsatzVariant variant) {
  return variant == AnsatzVariant::XConditioned ? "x_conditioned" : "z_conditioned";
}

Circuit build_vqe_ansatz(std::span<const double> theta, const EncodingMap& map, AnsatzVariant variant) {
  if (theta.size() != 4) throw ConfigError("vqe ansatz: expected 4 parameters");
  if (map.d() != 4 || map.qubit_dim() != 2) {
    throw ConfigError("vqe ansatz: requires S1 = 3/2, s2 = 1/2 hardware");
  }
  const bool x = variant == AnsatzVariant::XConditioned;
  Circuit out{QubitRot{Axis::Y, x ? theta[0] - 0.5 * kPi : theta[0]}, CondQuditPairRot{0, Axis::Y, theta[1]},
              CondQuditPairRot{1, Axis::Y, theta[2]}, CondQuditPairRot{2, Axis::Y, theta[3]}};
  if (x) out.push_back(QubitRot{Axis::Y, 0.5 * kPi});
  return out;
}

namespace {

void check_trotter_inputs(const RabiSpec& spec, const EncodingMap& map) {
  validate(spec);
  if (spec.d != map.d()) {
    throw ConfigError("trotter: RabiSpec.d = " + std::to_string(spec.d) +
                      " does not match the qudit dimension " + std::to_string(map.d()));
  }
}

// e^{-i 2 G tau sz (a + a^dag)} split into conditioned pair rotations,
// symmetrized as odd/2, even, odd/2.
void append_conditioned_coupling(Circuit& out, const RabiSpec& spec, double tau, const EncodingMap& map) {
  auto layer = [&](int parity, double scale) {
    for (int n = parity; n + 1 < map.d(); n += 2) {
      out.push_back(CondQuditPairRot{n, Axis::X, scale * 2.0 * spec.G * tau * std::sqrt(n + 1.0)});
    }
  };
  const bool has_odd = map.d() > 2;
  if (has_odd) layer(1, 0.5);
  layer(0, 1.0);
  if (has_odd) layer(1, 0.5);
}

DiagonalPhase photon_phase(const RabiSpec& spec, double tau, const EncodingMap& map) {
  DiagonalPhase p{std::vector<double>(map.hardware_dim(), 0.0)};
  for (int n = 0; n < map.d(); ++n) {
    for (bool up : {true, false}) p.phases[map.hardware_index(n, up)] = spec.Omega * tau * n;
  }
  return p;
}

DiagonalPhase atom_phase(const RabiSpec& spec, double tau, const EncodingMap& map) {
  DiagonalPhase p{std::vector<double>(map.hardware_dim(), 0.0)};
  for (int n = 0; n < map.d(); ++n) {
    p.phases[map.hardware_index(n, true)] = 0.5 * spec.omega_a * tau;
    p.phases[map.hardware_index(n, false)] = -0.5 * spec.omega_a * tau;
  }
  return p;
}

}  // namespace

Circuit compile_trotter_step(const RabiSpec& spec, double tau, const EncodingMap& map) {
  check_trotter_inputs(spec, map);
  if (!(tau > 0.0)) throw ConfigError("trotter: tau must be positive");
  Circuit out;
  out.push_back(QubitRot{Axis::Y, -0.5 * kPi});
  append_conditioned_coupling(out, spec, tau, map);
  out.push_back(QubitRot{Axis::Y, 0.5 * kPi});
  out.push_back(photon_phase(spec, tau, map));
  out.push_back(atom_phase(spec, tau, map));
  return out;
}

Circuit compile_trotter_circuit(const RabiSpec& spec, double t, int steps, const EncodingMap& map,
                                bool merge_rotations) {
  check_trotter_inputs(spec, map);
  if (steps < 1) throw ConfigError("trotter: step count must be >= 1");
  if (!(t > 0.0)) throw ConfigError("trotter: evolution time must be positive");
  const double tau = t / steps;
  Circuit out;
  if (!merge_rotations) {
    for (int k = 0; k < steps; ++k) {
      const Circuit step = compile_trotter_step(spec, tau, map);
      out.insert(out.end(), step.begin(), step.end());
    }
    return out;
  }
  // Ry(pi/2) . e^{-i b sz} . Ry(-pi/2) in time order equals e^{+i b sx}.
  out.push_back(QubitRot{Axis::Y, -0.5 * kPi});
  for (int k = 0; k < steps; ++k) {
    append_conditioned_coupling(out, spec, tau, map);
    if (k + 1 < steps) {
      out.push_back(photon_phase(spec, tau, map));
      out.push_back(QubitRot{Axis::X, -spec.omega_a * tau});
    } else {
      out.push_back(QubitRot{Axis::Y, 0.5 * kPi});
      out.push_back(photon_phase(spec, tau, map));
      out.push_back(atom_phase(spec, tau, map));
    }
  }
  return out;
}

}  // namespace quditsim
