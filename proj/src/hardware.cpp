#include "quditsim/hardware.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <tuple>

namespace quditsim {

void validate(const HardwareSpec& spec) {
  if (!is_valid_spin(spec.S1) || spec.S1 < 1.5) {
    throw ConfigError("hardware: qudit spin S1 must be a half-integer >= 3/2, got " +
                      std::to_string(spec.S1));
  }
  if (!(spec.s2 == 0.5 || spec.s2 == 1.0)) {
    throw ConfigError("hardware: qubit carrier spin s2 must be 1/2 or 1, got " +
                      std::to_string(spec.s2));
  }
  const double t2[] = {spec.qudit_T2(), spec.qubit_T2()};
  for (double t : t2) {
    if (!(t > 0.0)) throw ConfigError("hardware: T2 must be positive");
  }
  const double finite[] = {spec.g1, spec.g2, spec.B, spec.D, spec.Dprime, spec.Jx, spec.Jy, spec.Jz};
  for (double v : finite) {
    if (!std::isfinite(v)) throw ConfigError("hardware: non-finite parameter");
  }
}

HardwareSpec with_axial_dipolar_coupling(HardwareSpec spec, double jxy) {
  spec.Jx = jxy;
  spec.Jy = jxy;
  spec.Jz = -2.0 * jxy;
  return spec;
}

IonPreset ion_preset(std::string_view name) {
  if (name == "Cr") return {"Cr", 1.5, 1.98, 0.24};
  if (name == "Fe") return {"Fe", 2.5, 2.00, -0.30};
  if (name == "Cu") return {"Cu", 0.5, 2.3, 0.0};
  if (name == "Ni") return {"Ni", 1.0, 2.18, -0.24};
  throw ConfigError("unknown ion preset '" + std::string(name) + "' (expected Cr, Fe, Cu or Ni)");
}

ComplexMatrix build_hardware_hamiltonian(const HardwareSpec& spec) {
  validate(spec);
  const SpinOperators q = spin_matrices(spec.S1);
  const SpinOperators c = spin_matrices(spec.s2);
  const ComplexMatrix i1 = identity(q.dim);
  const ComplexMatrix i2 = identity(c.dim);
  const double mub = units::kBohrMagnetonGHzPerTesla;
  const double cm = units::kGHzPerWavenumber;

  ComplexMatrix h = spec.g1 * mub * spec.B * kron(q.Sz, i2);
  h += spec.g2 * mub * spec.B * kron(i1, c.Sz);
  h += spec.D * cm * kron(q.Sz * q.Sz, i2);
  h += spec.Dprime * cm * kron(i1, c.Sz * c.Sz);
  h += spec.Jx * cm * kron(q.Sx, c.Sx);
  h += spec.Jy * cm * kron(q.Sy, c.Sy);
  h += spec.Jz * cm * kron(q.Sz, c.Sz);
  return h;
}

const Transition* TransitionTable::find(int level_a, int level_b) const {
  for (const auto& t : lines) {
    if ((t.from_level == level_a && t.to_level == level_b) ||
        (t.from_level == level_b && t.to_level == level_a)) {
      return &t;
    }
  }
  return nullptr;
}

namespace {

struct Labeling {
  RealVector energies;   // by label
  ComplexMatrix w;       // column k = eigenvector labeled k
  std::vector<double> overlap;
  bool conserves_m = false;
};

// Diagonalizes h (dim1*dim2) and assigns each eigenvector to a product state.
// When h commutes with the total m operator the diagonalization is done per
// block so that degenerate levels never mix different total m.
Labeling label_eigenstates(const ComplexMatrix& h, const std::vector<double>& m1,
                           const std::vector<double>& m2) {
  const int d2 = static_cast<int>(m2.size());
  const int n = static_cast<int>(h.rows());
  std::vector<double> total(n);
  for (int k = 0; k < n; ++k) total[k] = m1[k / d2] + m2[k % d2];

  double leak = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (std::abs(total[i] - total[j]) > 1e-9) leak = std::max(leak, std::abs(h(i, j)));

  Labeling out;
  out.conserves_m = leak < 1e-12;

  RealVector values(n);
  ComplexMatrix vectors = ComplexMatrix::Zero(n, n);
  if (out.conserves_m) {
    std::map<long, std::vector<int>> blocks;
    for (int k = 0; k < n; ++k) blocks[std::lround(2.0 * total[k])].push_back(k);
    int col = 0;
    for (const auto& [key, idx] : blocks) {
      const int b = static_cast<int>(idx.size());
      ComplexMatrix sub(b, b);
      for (int i = 0; i < b; ++i)
        for (int j = 0; j < b; ++j) sub(i, j) = h(idx[i], idx[j]);
      const EigenDecomposition eig = eig_hermitian(sub);
      for (int j = 0; j < b; ++j, ++col) {
        values(col) = eig.values(j);
        for (int i = 0; i < b; ++i) vectors(idx[i], col) = eig.vectors(i, j);
      }
    }
  } else {
    const EigenDecomposition eig = eig_hermitian(h);
    values = eig.values;
    vectors = eig.vectors;
  }

  // Greedy assignment by decreasing overlap; a bijection by construction.
  std::vector<std::tuple<double, int, int>> cand;
  cand.reserve(static_cast<size_t>(n) * n);
  for (int p = 0; p < n; ++p)
    for (int e = 0; e < n; ++e) cand.emplace_back(std::norm(vectors(p, e)), p, e);
  std::sort(cand.begin(), cand.end(),
            [](const auto& a, const auto& b) { return std::get<0>(a) > std::get<0>(b); });
  std::vector<int> eig_of_label(n, -1);
  std::vector<bool> used(n, false);
  int assigned = 0;
  for (const auto& [ov, p, e] : cand) {
    if (eig_of_label[p] >= 0 || used[e]) continue;
    eig_of_label[p] = e;
    used[e] = true;
    if (++assigned == n) break;
  }

  out.energies.resize(n);
  out.w.resize(n, n);
  out.overlap.resize(n);
  for (int p = 0; p < n; ++p) {
    const int e = eig_of_label[p];
    ComplexVector v = vectors.col(e);
    // Dominant component real and positive.
    const Complex dom = v(p);
    if (std::abs(dom) > 0.0) v *= std::conj(dom) / std::abs(dom);
    out.w.col(p) = v;
    out.energies(p) = values(e);
    out.overlap[p] = std::norm(v(p));
  }
  return out;
}

std::vector<double> m_values(double S) { return spin_matrices(S).m; }

LevelTable make_level_table(const Labeling& lab, const std::vector<double>& m1,
                            const std::vector<double>& m2) {
  const int d2 = static_cast<int>(m2.size());
  const int n = static_cast<int>(lab.energies.size());
  LevelTable table;
  table.levels.reserve(n);
  table.min_overlap = 1.0;
  for (int k = 0; k < n; ++k) {
    LevelInfo info;
    info.energy_ghz = lab.energies(k);
    info.label = {m1[k / d2], m2[k % d2]};
    info.product_index = k;
    info.overlap = lab.overlap[k];
    table.min_overlap = std::min(table.min_overlap, info.overlap);
    table.levels.push_back(info);
  }
  std::stable_sort(table.levels.begin(), table.levels.end(),
                   [](const LevelInfo& a, const LevelInfo& b) { return a.energy_ghz < b.energy_ghz; });
  table.factorization_warning = table.min_overlap < kFactorizationThreshold;
  return table;
}

TransitionTable make_transition_table(const Labeling& lab, const ComplexMatrix& drive_labeled,
                                      const std::vector<double>& m1, const std::vector<double>& m2) {
  const int d2 = static_cast<int>(m2.size());
  const int n = static_cast<int>(lab.energies.size());
  TransitionTable table;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double dm1 = std::abs(m1[i / d2] - m1[j / d2]);
      const double dm2 = std::abs(m2[i % d2] - m2[j % d2]);
      const bool qudit = std::abs(dm1 - 1.0) < 1e-9 && dm2 < 1e-9;
      const bool qubit = std::abs(dm2 - 1.0) < 1e-9 && dm1 < 1e-9;
      if (!qudit && !qubit) continue;
      const bool i_lower = lab.energies(i) <= lab.energies(j);
      const int lo = i_lower ? i : j;
      const int hi = i_lower ? j : i;
      const Complex element = drive_labeled(hi, lo);
      if (std::abs(element) <= 1e-6) continue;
      Transition t;
      t.from_level = lo;
      t.to_level = hi;
      t.from = {m1[lo / d2], m2[lo % d2]};
      t.to = {m1[hi / d2], m2[hi % d2]};
      t.frequency_ghz = lab.energies(hi) - lab.energies(lo);
      t.matrix_element = element;
      t.qudit_line = qudit;
      table.lines.push_back(t);
    }
  }
  std::sort(table.lines.begin(), table.lines.end(),
            [](const Transition& a, const Transition& b) { return a.frequency_ghz < b.frequency_ghz; });
  return table;
}

ComplexMatrix product_drive(const HardwareSpec& spec) {
  const SpinOperators q = spin_matrices(spec.S1);
  const SpinOperators c = spin_matrices(spec.s2);
  return spec.g1 * kron(q.Sx, identity(c.dim)) + spec.g2 * kron(identity(q.dim), c.Sx);
}

void require_matching_dims(const ComplexMatrix& h, const HardwareSpec& spec) {
  validate(spec);
  const int n = spin_dim(spec.S1) * spin_dim(spec.s2);
  if (h.rows() != n || h.cols() != n) {
    throw ConfigError("hardware Hamiltonian dimension does not match the spin sizes");
  }
}

}  // namespace

LevelTable level_table(const ComplexMatrix& h, const HardwareSpec& spec) {
  require_matching_dims(h, spec);
  const auto m1 = m_values(spec.S1);
  const auto m2 = m_values(spec.s2);
  return make_level_table(label_eigenstates(h, m1, m2), m1, m2);
}

TransitionTable transition_table(const ComplexMatrix& h, const HardwareSpec& spec) {
  require_matching_dims(h, spec);
  const auto m1 = m_values(spec.S1);
  const auto m2 = m_values(spec.s2);
  const Labeling lab = label_eigenstates(h, m1, m2);
  const ComplexMatrix drive = lab.w.adjoint() * product_drive(spec) * lab.w;
  return make_transition_table(lab, drive, m1, m2);
}

SpinSystem::SpinSystem(const HardwareSpec& spec) : spec_(spec) {
  validate(spec_);
  const SpinOperators q = spin_matrices(spec_.S1);
  const SpinOperators c = spin_matrices(spec_.s2);
  dim1_ = q.dim;
  dim2_ = c.dim;
  m1_ = q.m;
  m2_ = c.m;
  h_product_ = build_hardware_hamiltonian(spec_);

  const Labeling lab = label_eigenstates(h_product_, m1_, m2_);
  energies_ = lab.energies;
  w_ = lab.w;
  conserves_m_ = lab.conserves_m;

  const ComplexMatrix i1 = identity(dim1_);
  const ComplexMatrix i2 = identity(dim2_);
  drive_ = from_product(product_drive(spec_));
  drive_raising_ =
      from_product(0.5 * (spec_.g1 * kron(q.Splus, i2) + spec_.g2 * kron(i1, c.Splus)));
  sz1_ = from_product(kron(q.Sz, i2));
  sz2_ = from_product(kron(i1, c.Sz));

  levels_ = make_level_table(lab, m1_, m2_);
  transitions_ = make_transition_table(lab, drive_, m1_, m2_);
}

ProductLabel SpinSystem::label(int k) const { return {m1_[k / dim2_], m2_[k % dim2_]}; }

double SpinSystem::total_m(int k) const { return m1_[k / dim2_] + m2_[k % dim2_]; }

ComplexMatrix SpinSystem::to_product(const ComplexMatrix& op) const {
  return w_ * op * w_.adjoint();
}

ComplexMatrix SpinSystem::from_product(const ComplexMatrix& op) const {
  return w_.adjoint() * op * w_;
}

}  // namespace quditsim
