#pragma once

#include "quditsim/dynamics.hpp"
#include "quditsim/encoding.hpp"
#include "quditsim/hardware.hpp"
#include "quditsim/nelder_mead.hpp"
#include "quditsim/pulse_compiler.hpp"
#include "quditsim/target.hpp"

#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace quditsim {

enum class Backend { Ideal, Rwa, Lab };

Backend parse_backend(std::string_view name);
std::string to_string(Backend backend);

/// Rabi Hamiltonian embedded on the computational hardware levels.
ComplexMatrix encoded_hamiltonian(const RabiSpec& spec, const EncodingMap& map);

/// Tr(rho H_enc).
double energy_expectation(const DensityMatrix& rho, const EncodingMap& map, const RabiSpec& spec);

/// Shot-noise estimate of Tr(rho H_enc): `shots` projective measurements in
/// the eigenbasis of H_enc, averaged.
double sampled_energy(const DensityMatrix& rho, const EncodingMap& map, const RabiSpec& spec, long shots,
                      std::mt19937_64& rng);

/// sqrt(<psi|rho|psi>) clipped to [0, 1].
double fidelity(const DensityMatrix& rho, const ComplexVector& psi);

/// Encoded |n = 0, down>.
ComplexVector encoded_vacuum(const EncodingMap& map);

struct VqeConfig {
  HardwareSpec hardware;
  RabiSpec rabi;
  std::vector<double> g_grid{0.6};
  Backend backend = Backend::Ideal;
  NelderMeadOptions optimizer;
  int random_restarts = 3;
  std::uint64_t seed = 1;
  long shots = 0;  // 0: exact expectation values
  AnsatzVariant ansatz = AnsatzVariant::XConditioned;
  PulsePolicy policy;
};

void validate(const VqeConfig& cfg);

struct VqePoint {
  double G = 0.0;
  std::vector<double> theta;
  double energy = 0.0;        // backend state, exact expectation value
  double ansatz_energy = 0.0; // same theta, ideal gates
  double exact_energy = 0.0;  // truncated diagonalization
  double photons = 0.0;
  double atom_excitation = 0.0;  // P(up) = <sz> + 1/2
  double exact_photons = 0.0;
  double exact_atom_excitation = 0.0;
  std::vector<double> trace;  // best-so-far objective over all restarts
  int evaluations = 0;
  bool converged = false;
  double sequence_ns = 0.0;
};

std::vector<VqePoint> run_vqe(const VqeConfig& cfg);

/// Energy and observables of the ansatz state for one parameter vector.
struct AnsatzState {
  DensityMatrix rho;
  double sequence_ns = 0.0;
};
AnsatzState prepare_ansatz(const std::vector<double>& theta, const SpinSystem& sys, const EncodingMap& map,
                           Backend backend, const PulsePolicy& policy,
                           AnsatzVariant variant = AnsatzVariant::XConditioned);

struct DqsConfig {
  std::string name = "dqs";
  HardwareSpec hardware;
  RabiSpec rabi;
  std::vector<double> times = default_time_grid();
  int steps = 4;
  int steps_after_split = 4;
  double split_time = std::numeric_limits<double>::infinity();
  bool merge_rotations = true;
  Backend backend = Backend::Rwa;
  std::vector<double> t2_us{kInfiniteT2};
  PulsePolicy policy;

  int steps_at(double t) const { return t <= split_time ? steps : steps_after_split; }
};

void validate(const DqsConfig& cfg);

struct DqsPoint {
  double t = 0.0;
  int steps = 0;
  int pulses = 0;
  double sequence_ns = 0.0;
  double photons = 0.0;
  double sigma_z = 0.0;
  double leakage = 0.0;
  double ideal_photons = 0.0;  // digital result with perfect gates
  double ideal_sigma_z = 0.0;
  double exact_photons = 0.0;  // exact evolution at the same truncation
  double exact_sigma_z = 0.0;
  double fidelity = 0.0;
  double max_trace_error = 0.0;  // over all sampled times of the sequence
  double min_eigenvalue = 0.0;
};

struct DqsRun {
  double t2_us = kInfiniteT2;
  std::vector<DqsPoint> points;
  double average_fidelity = 0.0;
  double max_sequence_ns = 0.0;
  double mean_sequence_ns = 0.0;
};

struct DqsResult {
  std::vector<DqsRun> runs;  // one per T2
};

DqsResult run_dqs(const DqsConfig& cfg);

}  // namespace quditsim
