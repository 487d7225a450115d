// Copyright 2026 the rio-cqed authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <numbers>

#include "rio/circuit.hpp"
#include "rio/protocol.hpp"

namespace rio {

/// Ladder levels of the flying atoms. Only g and e couple to the cavity; the
/// auxiliary level i parks amplitude between the dressing pulses.
enum class Level { G = 0, E = 1, I = 2 };

/// Apparatus dial settings. The effective two-atom coupling lambda = g^2/delta
/// is always derived, never stored.
struct PhysicalParams {
  double coupling = 2.0 * std::numbers::pi * 24e3;  ///< atom-cavity g, rad/s
  double detuning = 10.0 * 2.0 * std::numbers::pi * 24e3;  ///< omega0 - omega, rad/s
  double q_factor = 1e8;
  double cavity_frequency = 50e9;         ///< Hz
  double radiative_time = 3e-2;           ///< s
  double pulse_time = 6.3e-6;             ///< s, classical-field pass
  double excitation_probability = 0.01;   ///< residual cavity excitation

  static PhysicalParams from_dials(double g_khz, double delta_over_g, double q, double cavity_ghz,
                                   double radiative, double pulse, double excitation) {
    double g = 2.0 * std::numbers::pi * g_khz * 1e3;
    return PhysicalParams{g, delta_over_g * g, q, cavity_ghz * 1e9, radiative, pulse, excitation};
  }

  double lambda() const { return coupling * coupling / detuning; }
  double cnot_stage_time() const { return std::numbers::pi / lambda(); }
  double jc_stage_time() const { return std::numbers::pi / coupling; }
  double photon_lifetime() const { return q_factor / (2.0 * std::numbers::pi * cavity_frequency); }
  double effective_decay_time() const { return photon_lifetime() / excitation_probability; }

  /// The two-atom Hamiltonian assumes detuning large against coupling.
  bool dispersive_regime() const { return detuning >= 10.0 * coupling - 1e-9; }

  void validate() const {
    for (double v : {coupling, detuning, q_factor, cavity_frequency, radiative_time, pulse_time,
                     excitation_probability})
      if (!(v > 0.0) || !std::isfinite(v))
        throw std::invalid_argument("PhysicalParams: all parameters must be positive and finite");
  }
};

/// One atom enters the cavity a fraction of the stage time before the other.
struct StaggeredSchedule {
  double offset_fraction;  ///< tau / t, of the nominal two-atom time t = pi/lambda
  int early_atom = 1;      ///< 1 = control, 2 = target

  void validate() const {
    if (!(offset_fraction >= 0.0) || offset_fraction >= 1.0)
      throw std::invalid_argument("StaggeredSchedule: offset_fraction must be in [0, 1)");
    if (early_atom != 1 && early_atom != 2)
      throw std::invalid_argument("StaggeredSchedule: early_atom must be 1 or 2");
  }
};

namespace detail {

inline void check_two_atom_state(const StateVector& s, const char* what) {
  if (s.dims() != std::vector<int>{3, 3})
    throw std::invalid_argument(std::string(what) + ": state must cover two 3-level atoms");
}

inline int atom_target(int atom, const char* what) {
  if (atom != 1 && atom != 2) throw std::invalid_argument(std::string(what) + ": atom must be 1 or 2");
  return atom - 1;
}

}  // namespace detail

/// Effective two-atom Hamiltonian in the vacuum cavity: an energy shift on
/// each excited atom plus an excitation-exchange term between them, both at
/// strength lambda. The auxiliary level is dark.
inline HermitianMatrix dispersive_hamiltonian(double lambda) {
  Matrix h = Matrix::Zero(9, 9);
  for (int m = 0; m < 9; ++m) {
    int first = m / 3, second = m % 3;
    h(m, m) = lambda * ((first == 1 ? 1 : 0) + (second == 1 ? 1 : 0));
  }
  int eg = 1 * 3 + 0, ge = 0 * 3 + 1;
  h(eg, ge) = lambda;
  h(ge, eg) = lambda;
  return HermitianMatrix(std::move(h));
}

inline StateVector dispersive_evolve(const StateVector& s, const PhysicalParams& p,
                                     double duration) {
  detail::check_two_atom_state(s, "dispersive_evolve");
  p.validate();
  if (!(duration >= 0.0)) throw std::invalid_argument("dispersive_evolve: negative duration");
  UnitaryMatrix u = expm_hermitian(dispersive_hamiltonian(p.lambda()), duration);
  return apply_operator(s, u.mat(), {0, 1});
}

/// Evolution while only one atom occupies the cavity: the same energy shift
/// on that atom's excited level, with no partner to exchange with.
inline StateVector solo_dispersive_evolve(const StateVector& s, const PhysicalParams& p,
                                          double duration, int atom) {
  detail::check_two_atom_state(s, "solo_dispersive_evolve");
  p.validate();
  if (!(duration >= 0.0)) throw std::invalid_argument("solo_dispersive_evolve: negative duration");
  int target = detail::atom_target(atom, "solo_dispersive_evolve");
  Matrix h = Matrix::Zero(3, 3);
  h(1, 1) = p.lambda();
  UnitaryMatrix u = expm_hermitian(HermitianMatrix(std::move(h)), duration);
  return apply_operator(s, u.mat(), {target});
}

enum class PulseStage { Pre, Post };

/// One classical-field pass: a fixed rotation on a single transition,
/// identity on the remaining level.
struct PulseSpec {
  PulseStage stage;
  std::array<Level, 2> transition;
  UnitaryMatrix matrix;
};

/// The two field passes composing each dressing pulse, in application order.
/// Pre: rotate (g,e) by g -> (g-e)/sqrt2, e -> (e+g)/sqrt2, then swap e and i.
/// Post: swap e and i, then rotate (g,e) by g -> (g+e)/sqrt2, e -> (e-g)/sqrt2.
inline const std::array<PulseSpec, 2>& pulse_stages(PulseStage stage) {
  static const double s = 1.0 / std::sqrt(2.0);
  static const UnitaryMatrix swap_ei = [] {
    Matrix m = Matrix::Zero(3, 3);
    m(0, 0) = 1;
    m(1, 2) = 1;
    m(2, 1) = 1;
    return UnitaryMatrix::checked(std::move(m), kConstructiveTol);
  }();
  static const std::array<PulseSpec, 2> pre = [] {
    Matrix rot = Matrix::Identity(3, 3);
    rot(0, 0) = s;
    rot(0, 1) = s;
    rot(1, 0) = -s;
    rot(1, 1) = s;
    return std::array<PulseSpec, 2>{
        PulseSpec{PulseStage::Pre, {Level::G, Level::E},
                  UnitaryMatrix::checked(std::move(rot), kConstructiveTol)},
        PulseSpec{PulseStage::Pre, {Level::E, Level::I}, swap_ei}};
  }();
  static const std::array<PulseSpec, 2> post = [] {
    Matrix rot = Matrix::Identity(3, 3);
    rot(0, 0) = s;
    rot(0, 1) = -s;
    rot(1, 0) = s;
    rot(1, 1) = s;
    return std::array<PulseSpec, 2>{
        PulseSpec{PulseStage::Post, {Level::E, Level::I}, swap_ei},
        PulseSpec{PulseStage::Post, {Level::G, Level::E},
                  UnitaryMatrix::checked(std::move(rot), kConstructiveTol)}};
  }();
  return stage == PulseStage::Pre ? pre : post;
}

/// Composite dressing pulse: g -> (g-i)/sqrt2, e -> (g+i)/sqrt2, i -> e.
inline const UnitaryMatrix& pulse_pre_matrix() {
  static const UnitaryMatrix u = [] {
    const auto& st = pulse_stages(PulseStage::Pre);
    return UnitaryMatrix::checked(st[1].matrix.mat() * st[0].matrix.mat(), kConstructiveTol);
  }();
  return u;
}

/// Composite undressing pulse: g -> (g+e)/sqrt2, e -> i, i -> (e-g)/sqrt2.
inline const UnitaryMatrix& pulse_post_matrix() {
  static const UnitaryMatrix u = [] {
    const auto& st = pulse_stages(PulseStage::Post);
    return UnitaryMatrix::checked(st[1].matrix.mat() * st[0].matrix.mat(), kConstructiveTol);
  }();
  return u;
}

inline StateVector pulse_pre(const StateVector& s, int atom) {
  detail::check_two_atom_state(s, "pulse_pre");
  return apply_operator(s, pulse_pre_matrix().mat(), {detail::atom_target(atom, "pulse_pre")});
}

inline StateVector pulse_post(const StateVector& s, int atom) {
  detail::check_two_atom_state(s, "pulse_post");
  return apply_operator(s, pulse_post_matrix().mat(), {detail::atom_target(atom, "pulse_post")});
}

namespace detail {

/// Cavity stage of the entangling gate as a 9x9 operator on (control, target),
/// optionally with one atom entering early and leaving early.
inline Matrix cavity_stage_matrix(const PhysicalParams& p,
                                  const std::optional<StaggeredSchedule>& schedule) {
  double t = p.cnot_stage_time();
  double tau = 0.0;
  int early = 1;
  if (schedule) {
    schedule->validate();
    tau = schedule->offset_fraction * t;
    early = schedule->early_atom;
  }
  Matrix solo = Matrix::Identity(3, 3);
  solo(1, 1) = std::exp(cxd(0.0, -p.lambda() * tau));
  Matrix joint = expm_hermitian(dispersive_hamiltonian(p.lambda()), t - tau).mat();
  Matrix early_op = early == 1 ? kron(solo, Matrix::Identity(3, 3))
                               : kron(Matrix::Identity(3, 3), solo);
  Matrix late_op = early == 1 ? kron(Matrix::Identity(3, 3), solo)
                              : kron(solo, Matrix::Identity(3, 3));
  return late_op * joint * early_op;
}

inline double aux_population(const StateVector& s) {
  double pop = 0.0;
  auto stride = strides(s.dims());
  for (Eigen::Index idx = 0; idx < s.dim(); ++idx)
    for (size_t k = 0; k < s.dims().size(); ++k)
      if (s.dims()[k] == 3 && (idx / stride[k]) % 3 == 2) {
        pop += std::norm(s.amps()(idx));
        break;
      }
  return pop;
}

}  // namespace detail

/// The full entangling gate on (control, target) = (atom 1, atom 2): dressing
/// pulse on the target, the cavity stage at lambda*t = pi, undressing pulse.
/// With the ideal schedule this is exactly CNOT on the computational levels.
inline Matrix physical_cnot_matrix(const PhysicalParams& p,
                                   std::optional<StaggeredSchedule> schedule = std::nullopt) {
  p.validate();
  Matrix pre = kron(Matrix::Identity(3, 3), pulse_pre_matrix().mat());
  Matrix post = kron(Matrix::Identity(3, 3), pulse_post_matrix().mat());
  return post * detail::cavity_stage_matrix(p, schedule) * pre;
}

inline StateVector physical_cnot(const StateVector& s, const PhysicalParams& p,
                                 std::optional<StaggeredSchedule> schedule = std::nullopt) {
  detail::check_two_atom_state(s, "physical_cnot");
  if (std::sqrt(detail::aux_population(s)) > 1e-12)
    throw std::domain_error("physical_cnot: input carries auxiliary-level amplitude");
  return apply_operator(s, physical_cnot_matrix(p, schedule), {0, 1});
}

/// Resonant atom-cavity exchange, truncated at Fock level N = dims[1] - 1.
/// Couples |e,n> and |g,n+1> at strength g*sqrt(n+1). The top rung |e,N> has
/// no partner inside the truncation, so amplitude there means the cap is too
/// low; rejected beyond 1e-10 on entry and exit.
inline StateVector jc_evolve(const StateVector& s, const PhysicalParams& p, double duration) {
  if (s.subsystems() != 2 || s.dims()[0] != 2 || s.dims()[1] < 2)
    throw std::invalid_argument("jc_evolve: state must cover a 2-level atom and Fock levels 0..N");
  p.validate();
  if (!(duration >= 0.0)) throw std::invalid_argument("jc_evolve: negative duration");
  int fock = s.dims()[1];
  int cap = fock - 1;
  auto top_rung = [&](const StateVector& v) { return std::abs(v.amps()(1 * fock + cap)); };
  if (top_rung(s) > 1e-10)
    throw std::runtime_error("jc_evolve: truncation overflow at Fock cap " + std::to_string(cap));
  Matrix h = Matrix::Zero(2 * fock, 2 * fock);
  for (int n = 0; n + 1 < fock; ++n) {
    double g = p.coupling * std::sqrt(n + 1.0);
    h(1 * fock + n, 0 * fock + n + 1) = g;
    h(0 * fock + n + 1, 1 * fock + n) = g;
  }
  UnitaryMatrix u = expm_hermitian(HermitianMatrix(std::move(h)), duration);
  StateVector out = apply_operator(s, u.mat(), {0, 1});
  if (top_rung(out) > 1e-10)
    throw std::runtime_error("jc_evolve: truncation overflow at Fock cap " + std::to_string(cap));
  return out;
}

/// Ramsey-zone rotation: g -> (g+e)/sqrt2, e -> (e-g)/sqrt2. Equals
/// (I + i*sigma_y)/sqrt2 with the basis ordered (e, g); stored in (g, e) order.
inline const UnitaryMatrix& ramsey_plus_matrix() {
  static const UnitaryMatrix u = [] {
    double s = 1.0 / std::sqrt(2.0);
    Matrix m(2, 2);
    m << s, -s, s, s;
    return UnitaryMatrix::checked(std::move(m), kConstructiveTol);
  }();
  return u;
}

inline StateVector ramsey_plus(const StateVector& s) {
  if (s.dims() != std::vector<int>{2})
    throw std::invalid_argument("ramsey_plus: state must be a single 2-level atom");
  return apply_operator(s, ramsey_plus_matrix().mat(), {0});
}

/// Hadamard realized in flight: resonant exchange with the vacuum cavity for
/// g*t = pi (phase -1 on |e>), then the Ramsey rotation.
inline StateVector physical_hadamard(const StateVector& s, const PhysicalParams& p) {
  StateVector out = jc_evolve(s, p, p.jc_stage_time());
  return apply_operator(out, ramsey_plus_matrix().mat(), {0});
}

inline Matrix physical_hadamard_matrix(const PhysicalParams& p, int fock_levels = 2) {
  p.validate();
  if (fock_levels < 2) throw std::invalid_argument("physical_hadamard_matrix: need Fock levels 0..N, N >= 1");
  Matrix h = Matrix::Zero(2 * fock_levels, 2 * fock_levels);
  for (int n = 0; n + 1 < fock_levels; ++n) {
    double g = p.coupling * std::sqrt(n + 1.0);
    h(1 * fock_levels + n, 0 * fock_levels + n + 1) = g;
    h(0 * fock_levels + n + 1, 1 * fock_levels + n) = g;
  }
  Matrix jc = expm_hermitian(HermitianMatrix(std::move(h)), p.jc_stage_time()).mat();
  return kron(ramsey_plus_matrix().mat(), Matrix::Identity(fock_levels, fock_levels)) * jc;
}

namespace detail {

inline Matrix embed_qubit_op(const Matrix& op) {
  Matrix out = Matrix::Identity(3, 3);
  out.topLeftCorner(2, 2) = op;
  return out;
}

inline Matrix embed_two_qubit_op(const Matrix& op) {
  Matrix out = Matrix::Identity(9, 9);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      out((r / 2) * 3 + r % 2, (c / 2) * 3 + c % 2) = op(r, c);
  return out;
}

}  // namespace detail

/// Fidelity of the physically realized protocol against the ideal output when
/// the two atoms of every entangling stage enter the cavity offset_fraction
/// of the stage time apart. Runs the x = 10, b1 = b2 = 0, a1 = a2 = 1 branch
/// on six 3-level atoms with all single-atom rotations ideal.
inline double timing_error_fidelity(double offset_fraction, const StateVector& xi,
                                    const DiagonalPhases& t,
                                    const PhysicalParams& p = PhysicalParams{},
                                    int early_atom = 1) {
  if (!(offset_fraction >= 0.0) || offset_fraction > 0.5)
    throw std::invalid_argument("timing_error_fidelity: offset_fraction must be in [0, 0.5]");
  if (xi.dims() != std::vector<int>{2, 2})
    throw std::invalid_argument("timing_error_fidelity: xi must be a two-qubit state");
  p.validate();
  constexpr int x = 10;

  std::optional<StaggeredSchedule> schedule;
  if (offset_fraction > 0.0) schedule = StaggeredSchedule{offset_fraction, early_atom};
  Matrix cnot_stage = physical_cnot_matrix(p, schedule);

  const std::vector<int> dims(6, 3);
  Vector amps = Vector::Zero(729);
  auto stride = detail::strides(dims);
  for (int c1 = 0; c1 < 2; ++c1)
    for (int c2 = 0; c2 < 2; ++c2)
      for (int y1 = 0; y1 < 2; ++y1)
        for (int y2 = 0; y2 < 2; ++y2) {
          Eigen::Index idx = c1 * stride[0] + c2 * stride[1] + c1 * stride[2] + c2 * stride[3] +
                             y1 * stride[4] + y2 * stride[5];
          amps(idx) = 0.5 * xi.amps()(y1 * 2 + y2);
        }
  StateVector state = StateVector::unchecked(dims, std::move(amps));

  auto pcnot = [&](int control, int target) {
    return apply_operator(state, cnot_stage, {control, target});
  };
  state = pcnot(wire_index(Wire::Y1), wire_index(Wire::B1));
  state = pcnot(wire_index(Wire::Y2), wire_index(Wire::B2));
  state = measure(state, wire_index(Wire::B1), 0).second;
  state = measure(state, wire_index(Wire::B2), 0).second;

  state = apply_operator(state, detail::embed_two_qubit_op(build_T2(x, t).mat()),
                         {wire_index(Wire::A1), wire_index(Wire::A2)});
  Matrix h3 = detail::embed_qubit_op(gates::hadamard().mat());
  state = apply_operator(state, h3, {wire_index(Wire::A1)});
  state = apply_operator(state, h3, {wire_index(Wire::A2)});
  state = measure(state, wire_index(Wire::A1), 1).second;
  state = measure(state, wire_index(Wire::A2), 1).second;

  // Recovery word for x = 10 on physical hardware: bit flip on Y2, entangling
  // gate Y2 -> Y1, then the a1 = a2 = 1 phase corrections.
  state = apply_operator(state, detail::embed_qubit_op(gates::pauli_x().mat()),
                         {wire_index(Wire::Y2)});
  state = pcnot(wire_index(Wire::Y2), wire_index(Wire::Y1));
  Matrix z3 = detail::embed_qubit_op(gates::pauli_z().mat());
  state = apply_operator(state, z3, {wire_index(Wire::Y1)});
  state = apply_operator(state, z3, {wire_index(Wire::Y2)});

  // All of A and B sit in definite levels (1,1,0,0); the payload pair is the
  // remaining factor.
  Eigen::Index base = 1 * stride[0] + 1 * stride[1];
  Vector pair(9);
  for (int y1 = 0; y1 < 3; ++y1)
    for (int y2 = 0; y2 < 3; ++y2) pair(y1 * 3 + y2) = state.amps()(base + y1 * stride[4] + y2);

  Vector ideal4 = build_T2(x, t).mat() * xi.amps();
  Vector ideal = Vector::Zero(9);
  for (int y1 = 0; y1 < 2; ++y1)
    for (int y2 = 0; y2 < 2; ++y2) ideal(y1 * 3 + y2) = ideal4(y1 * 2 + y2);

  return std::norm(ideal.dot(pair));
}

/// Stage times, lifetimes, and the feasibility comparison for one protocol
/// run. Stage counts follow the x = 10 branch with every outcome-conditioned
/// correction spent: three entangling stages (two on the receiver's pairs,
/// one in recovery), two in-flight Hadamards, and thirteen classical-field
/// passes (two dressing each entangling stage, one Ramsey per Hadamard, two
/// outcome flips, two phase corrections, one recovery flip).
struct TimingReport {
  double cnot_stage_time;
  double jc_stage_time;
  double pulse_time;
  double photon_lifetime;
  double effective_decay_time;
  double radiative_time;
  int cnot_stages;
  int jc_stages;
  int pulse_stages;
  double total_time;
  bool within_radiative;
  bool within_cavity_decay;
};

/// Lifetimes must dominate the protocol by at least this factor to count as
/// "much longer".
inline constexpr double kFeasibilityMargin = 10.0;

inline TimingReport timing_report(const PhysicalParams& p) {
  p.validate();
  TimingReport r{};
  r.cnot_stage_time = p.cnot_stage_time();
  r.jc_stage_time = p.jc_stage_time();
  r.pulse_time = p.pulse_time;
  r.photon_lifetime = p.photon_lifetime();
  r.effective_decay_time = p.effective_decay_time();
  r.radiative_time = p.radiative_time;
  r.cnot_stages = 3;
  r.jc_stages = 2;
  r.pulse_stages = 3 * 2 + 2 * 1 + 2 + 2 + 1;
  r.total_time = r.cnot_stages * r.cnot_stage_time + r.jc_stages * r.jc_stage_time +
                 r.pulse_stages * r.pulse_time;
  r.within_radiative = r.total_time * kFeasibilityMargin <= r.radiative_time;
  r.within_cavity_decay = r.total_time * kFeasibilityMargin <= r.effective_decay_time;
  return r;
}

}  // namespace rio
