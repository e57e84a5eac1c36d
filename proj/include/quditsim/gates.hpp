#pragma once

#include "quditsim/encoding.hpp"
#include "quditsim/linalg.hpp"
#include "quditsim/target.hpp"

#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace quditsim {

enum class Axis { X, Y };

/// e^{-i angle s_axis} on the encoded qubit, for every qudit level.
struct QubitRot {
  Axis axis = Axis::X;
  double angle = 0.0;
};

/// Rotation on boson levels (level, level + 1), independent of the qubit.
struct QuditPairRot {
  int level = 0;
  Axis axis = Axis::X;
  double angle = 0.0;
};

/// Rotation on boson levels (level, level + 1) by +angle when the qubit is up
/// and by -angle when it is down.
struct CondQuditPairRot {
  int level = 0;
  Axis axis = Axis::X;
  double angle = 0.0;
};

/// diag(e^{-i phases[k]}) over hardware levels.
struct DiagonalPhase {
  std::vector<double> phases;
};

using Gate = std::variant<QubitRot, QuditPairRot, CondQuditPairRot, DiagonalPhase>;
using Circuit = std::vector<Gate>;

/// e^{-i theta/2 (cos(phi) X + sin(phi) Y)} on the hardware pair (upper, lower),
/// with X = |u><l| + |l><u| and Y = -i|u><l| + i|l><u|. `upper` is the level
/// with the larger m, so that on a spin 1/2 X = 2 sx and Y = 2 sy.
struct PairRotation {
  int upper = 0;
  int lower = 0;
  double theta = 0.0;
  double phi = 0.0;
};

double axis_phase(Axis axis);

/// Elementary rotations (acting on disjoint pairs) that make up a gate.
/// DiagonalPhase yields an empty list.
std::vector<PairRotation> pair_rotations(const Gate& gate, const EncodingMap& map);
ComplexMatrix pair_rotation_unitary(const PairRotation& rot, int dim);

ComplexMatrix gate_unitary(const Gate& gate, const EncodingMap& map);
/// Product of gate unitaries in time order (first gate acts first).
ComplexMatrix circuit_unitary(const Circuit& gates, const EncodingMap& map);

bool is_diagonal(const Gate& gate);
std::string describe(const Gate& gate);

/// Where the conditioned pair rotations of the VQE ansatz take their sign.
///  XConditioned: [Ry(theta1 - pi/2), Cond(0), Cond(1), Cond(2), Ry(pi/2)],
///    i.e. Ry(theta1) followed by rotations conditioned on the qubit sx basis.
///  ZConditioned: [Ry(theta1), Cond(0), Cond(1), Cond(2)], conditioned on sz.
///    With real amplitudes the coupling energy of this form is identically
///    zero, so it cannot go below -omega_a / 2.
enum class AnsatzVariant { XConditioned, ZConditioned };

AnsatzVariant parse_ansatz_variant(std::string_view name);
std::string to_string(AnsatzVariant variant);

/// Four-parameter ansatz: qubit y-rotation theta1 and conditioned
/// y-rotations theta2..4 on the three adjacent level pairs of an S1 = 3/2
/// qudit. theta = 0 is the identity in both variants.
Circuit build_vqe_ansatz(std::span<const double> theta, const EncodingMap& map,
                         AnsatzVariant variant = AnsatzVariant::XConditioned);

/// One first-order Trotter step for time tau, in time order:
/// qubit basis change, conditioned pair rotations (odd pairs half, even
/// pairs, odd pairs half), inverse basis change, photon phases, atom phases.
Circuit compile_trotter_step(const RabiSpec& spec, double tau, const EncodingMap& map);

/// `steps` Trotter steps for total time t. With merge_rotations the closing
/// basis change of one step, the atom phase and the opening basis change of
/// the next are fused into one qubit x-rotation (same unitary, fewer pulses).
Circuit compile_trotter_circuit(const RabiSpec& spec, double t, int steps, const EncodingMap& map,
                                bool merge_rotations = true);

}  // namespace quditsim
