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

#include <array>
#include <deque>
#include <map>
#include <optional>
#include <string>

#include "rio/circuit.hpp"

namespace rio {

// Protocol register layout. Alice holds A1 A2, Bob holds B1 B2 and the
// payload pair Y1 Y2; subsystem 0 is the most significant index digit.
enum class Wire { A1 = 0, A2 = 1, B1 = 2, B2 = 3, Y1 = 4, Y2 = 5 };

inline constexpr int wire_index(Wire w) { return static_cast<int>(w); }

inline constexpr const char* wire_label(Wire w) {
  switch (w) {
    case Wire::A1: return "A1";
    case Wire::A2: return "A2";
    case Wire::B1: return "B1";
    case Wire::B2: return "B2";
    case Wire::Y1: return "Y1";
    case Wire::Y2: return "Y2";
  }
  return "?";
}

inline std::string two_bit_label(int m) {
  if (m < 0 || m > 3) throw std::invalid_argument("two_bit_label: out of range");
  return std::string{char('0' + (m >> 1)), char('0' + (m & 1))};
}

/// x transmitted as five classical bits, most significant first (10 -> "01010").
inline std::string x_bit_string(int x) {
  if (x < 1 || x > 24) throw std::invalid_argument("x_bit_string: x out of range");
  std::string s(5, '0');
  for (int k = 0; k < 5; ++k)
    if (x & (1 << (4 - k))) s[k] = '1';
  return s;
}

/// The x-th permutation of the two-bit labels (00,01,10,11) in lexicographic
/// order, x = 1..24. p[m] is the label mapped onto m by the recovery operator.
struct PermutationSpec {
  int x;
  std::array<int, 4> p;

  std::array<std::string, 4> labels() const {
    return {two_bit_label(p[0]), two_bit_label(p[1]), two_bit_label(p[2]), two_bit_label(p[3])};
  }
};

inline PermutationSpec permutation_of_index(int x) {
  if (x < 1 || x > 24) throw std::invalid_argument("permutation_of_index: x must be in 1..24");
  // Factorial-base unranking of rank x-1 over the sorted labels.
  std::array<int, 4> pool{0, 1, 2, 3};
  std::array<int, 4> p{};
  int rem = x - 1;
  int fact[4] = {6, 2, 1, 1};
  for (int k = 0; k < 4; ++k) {
    int idx = rem / fact[k];
    rem %= fact[k];
    p[k] = pool[idx];
    for (int j = idx; j < 3 - k; ++j) pool[j] = pool[j + 1];
  }
  return {x, p};
}

/// Unimodular phases (t00, t01, t10, t11) dressing the recovery permutation.
class DiagonalPhases {
 public:
  explicit DiagonalPhases(std::array<cxd, 4> v, double tol = kConstructiveTol) : v_(v) {
    for (const cxd& t : v_) {
      if (!std::isfinite(t.real()) || !std::isfinite(t.imag()))
        throw std::invalid_argument("DiagonalPhases: non-finite entry");
      if (std::abs(std::abs(t) - 1.0) > tol)
        throw std::invalid_argument("DiagonalPhases: |t_m| = " + std::to_string(std::abs(t)) +
                                    " is not unimodular");
    }
  }

  static DiagonalPhases identity() { return DiagonalPhases({cxd(1), cxd(1), cxd(1), cxd(1)}); }

  const std::array<cxd, 4>& values() const { return v_; }
  cxd operator[](int m) const { return v_.at(m); }

 private:
  std::array<cxd, 4> v_;
};

/// 4x4 permutation matrix sending |p_m(x)> to |m>.
inline UnitaryMatrix build_R2(int x) {
  auto spec = permutation_of_index(x);
  Matrix m = Matrix::Zero(4, 4);
  for (int row = 0; row < 4; ++row) m(row, spec.p[row]) = 1.0;
  return UnitaryMatrix::checked(std::move(m), kConstructiveTol);
}

/// diag(t) * R2(x): one unimodular entry per row and column.
inline UnitaryMatrix build_T2(int x, const DiagonalPhases& t) {
  auto spec = permutation_of_index(x);
  Matrix m = Matrix::Zero(4, 4);
  for (int row = 0; row < 4; ++row) m(row, spec.p[row]) = t[row];
  return UnitaryMatrix::checked(std::move(m), kConstructiveTol);
}

// Generator alphabet for recovery-operator words, acting on the (Y1, Y2) pair.
enum class Generator { CnotY1Y2, CnotY2Y1, XOnY1, XOnY2 };

inline constexpr const char* generator_name(Generator g) {
  switch (g) {
    case Generator::CnotY1Y2: return "CNOT(Y1,Y2)";
    case Generator::CnotY2Y1: return "CNOT(Y2,Y1)";
    case Generator::XOnY1: return "X(Y1)";
    case Generator::XOnY2: return "X(Y2)";
  }
  return "?";
}

inline const Matrix& generator_matrix(Generator g) {
  static const Matrix c12 = gates::cnot().mat();
  static const Matrix c21 = [] {
    Matrix m = Matrix::Zero(4, 4);
    m(0, 0) = 1;
    m(1, 3) = 1;
    m(2, 2) = 1;
    m(3, 1) = 1;
    return m;
  }();
  static const Matrix x1 = kron(gates::pauli_x().mat(), gates::identity().mat());
  static const Matrix x2 = kron(gates::identity().mat(), gates::pauli_x().mat());
  switch (g) {
    case Generator::CnotY1Y2: return c12;
    case Generator::CnotY2Y1: return c21;
    case Generator::XOnY1: return x1;
    case Generator::XOnY2: return x2;
  }
  throw std::invalid_argument("generator_matrix: unknown generator");
}

/// Word over the generator alphabet, stored in product order: the last element
/// acts on the state first, matching how operator products are written.
using GateSequence = std::vector<Generator>;

inline Matrix sequence_matrix(const GateSequence& seq) {
  Matrix m = Matrix::Identity(4, 4);
  for (Generator g : seq) m *= generator_matrix(g);
  return m;
}

/// Published decomposition of R2(x) over {CNOT(Y1,Y2), CNOT(Y2,Y1), X(Y1), X(Y2)}.
inline const GateSequence& decomposition_table(int x) {
  using G = Generator;
  static const std::array<GateSequence, 25> table = [] {
    constexpr G A = G::CnotY1Y2, B = G::CnotY2Y1, X1 = G::XOnY1, X2 = G::XOnY2;
    std::array<GateSequence, 25> t;
    t[1] = {};
    t[2] = {A};
    t[3] = {B, A, B};
    t[4] = {B, A};
    t[5] = {A, B};
    t[6] = {B};
    t[7] = {A, X2};
    t[8] = {X2};
    t[9] = {X1, A, B};
    t[10] = {B, X2};
    t[11] = {B, X1, A, B};
    t[12] = {B, A, X2};
    t[13] = {B, A, X1};
    t[14] = {B, A, X1, B};
    t[15] = {B, X1};
    t[16] = {A, X1, B};
    t[17] = {X1};
    t[18] = {A, X1};
    t[19] = {X2, B};
    t[20] = {A, X2, B};
    t[21] = {B, X1, A};
    t[22] = {B, A, X2, B};
    t[23] = {X1, A};
    t[24] = {X1, X2};
    return t;
  }();
  if (x < 1 || x > 24) throw std::invalid_argument("decomposition_table: x must be in 1..24");
  return table[x];
}

namespace detail {

// Products of the generators stay exact 0/1 matrices, so a permutation
// encodes losslessly as four base-4 digits.
inline int encode_permutation(const Matrix& m) {
  int key = 0;
  for (int col = 0; col < 4; ++col) {
    int row = -1;
    for (int r = 0; r < 4; ++r) {
      double v = std::abs(m(r, col));
      if (v > 0.5) {
        if (row >= 0 || std::abs(m(r, col) - 1.0) > kConstructiveTol) return -1;
        row = r;
      } else if (v > kConstructiveTol) {
        return -1;
      }
    }
    if (row < 0) return -1;
    key = key * 4 + row;
  }
  return key;
}

}  // namespace detail

/// Shortest generator word for a 4x4 permutation matrix, by breadth-first
/// search over the generated group (all of S4, order 24). Words grow by
/// appending the next applied generator, so among equal-length words the
/// winner is lexicographically least in order of application, with
/// CNOT(Y1,Y2) < CNOT(Y2,Y1) < X(Y1) < X(Y2).
inline GateSequence synthesize_permutation(const Matrix& target) {
  if (target.rows() != 4 || target.cols() != 4)
    throw std::invalid_argument("synthesize_permutation: target must be 4x4");
  int goal = detail::encode_permutation(target);
  if (goal < 0)
    throw std::invalid_argument("synthesize_permutation: target is not a permutation matrix");

  constexpr std::array<Generator, 4> alphabet{Generator::CnotY1Y2, Generator::CnotY2Y1,
                                              Generator::XOnY1, Generator::XOnY2};
  std::map<int, Matrix> matrices;
  std::map<int, std::pair<int, Generator>> parent;
  Matrix id = Matrix::Identity(4, 4);
  int start = detail::encode_permutation(id);
  matrices.emplace(start, id);
  std::deque<int> queue{start};
  while (!queue.empty()) {
    int cur = queue.front();
    queue.pop_front();
    if (cur == goal) break;
    for (Generator g : alphabet) {
      Matrix next = generator_matrix(g) * matrices.at(cur);
      int key = detail::encode_permutation(next);
      if (matrices.contains(key)) continue;
      matrices.emplace(key, std::move(next));
      parent.emplace(key, std::pair{cur, g});
      queue.push_back(key);
    }
  }
  if (!matrices.contains(goal))
    throw std::logic_error("synthesize_permutation: target outside generated group");

  GateSequence word;
  for (int key = goal; key != start;) {
    auto [prev, g] = parent.at(key);
    word.push_back(g);  // later-applied generators sit leftmost in the product
    key = prev;
  }
  return word;
}

struct DecompositionAudit {
  int x;
  GateSequence published;
  GateSequence synthesized;
  double deviation;  ///< max |published product - R2(x)| entrywise
  bool match;
};

/// Checks every published word against its target permutation and pairs it
/// with a search-minimal alternative. Mismatches are report content.
inline std::array<DecompositionAudit, 24> verify_decompositions() {
  std::array<DecompositionAudit, 24> audits;
  for (int x = 1; x <= 24; ++x) {
    Matrix expected = build_R2(x).mat();
    const GateSequence& published = decomposition_table(x);
    double dev = (sequence_matrix(published) - expected).cwiseAbs().maxCoeff();
    audits[x - 1] = DecompositionAudit{x, published, synthesize_permutation(expected), dev,
                                       dev <= kConstructiveTol};
  }
  return audits;
}

/// Two Bell pairs shared across (A1,B1) and (A2,B2), with the payload pair in
/// state xi: the full six-qubit register (A1,A2,B1,B2,Y1,Y2).
inline StateVector prepare_channel_state(const StateVector& xi) {
  if (xi.dims() != std::vector<int>{2, 2})
    throw std::invalid_argument("prepare_channel_state: xi must be a two-qubit state");
  Vector amps = Vector::Zero(64);
  for (int c1 = 0; c1 < 2; ++c1)
    for (int c2 = 0; c2 < 2; ++c2)
      for (int y = 0; y < 4; ++y)
        amps(c1 * 32 + c2 * 16 + c1 * 8 + c2 * 4 + y) = 0.5 * xi.amps()(y);
  return StateVector::unchecked({2, 2, 2, 2, 2, 2}, std::move(amps));
}

/// Recovery word: R2(x) first (via the published table), then a Z
/// correction on Y1 when a1 = 1 and on Y2 when a2 = 1. Wires default to the
/// last two subsystems of the register.
inline StateVector apply_recovery(const StateVector& s, int a1, int a2, int x,
                                  std::optional<std::array<int, 2>> wires = std::nullopt) {
  if (a1 < 0 || a1 > 1 || a2 < 0 || a2 > 1)
    throw std::invalid_argument("apply_recovery: outcome bits must be 0 or 1");
  auto [y1, y2] = wires.value_or(std::array<int, 2>{s.subsystems() - 2, s.subsystems() - 1});
  StateVector out = s;
  const GateSequence& word = decomposition_table(x);
  for (auto it = word.rbegin(); it != word.rend(); ++it)
    out = apply_operator(out, generator_matrix(*it), {y1, y2});
  if (a1) out = apply_gate(out, gates::Gate::Z, {y1});
  if (a2) out = apply_gate(out, gates::Gate::Z, {y2});
  return out;
}

struct ProtocolTranscript {
  int x;
  std::string x_bits;
  DiagonalPhases phases;
  StateVector input;                        ///< xi on (Y1, Y2)
  std::array<int, 4> outcomes;              ///< b1, b2, a1, a2
  std::array<MeasurementRecord, 4> records; ///< per-measurement marginals
  double bob_branch_probability;            ///< joint P(b1, b2)
  double alice_branch_probability;          ///< joint P(a1, a2)
  StateVector pre_alice_state;              ///< register before Alice's measurement
  StateVector pre_recovery_output;          ///< (Y1, Y2) before Bob's recovery
  StateVector final_register;               ///< full six-qubit register
  StateVector output;                       ///< (Y1, Y2) after recovery
};

/// Runs the full remote-implementation protocol for operator index x with
/// phases t on payload state xi. Measurement outcomes follow forced_bits
/// (b1, b2, a1, a2) when given, otherwise the seeded generator.
inline ProtocolTranscript run_protocol(int x, const DiagonalPhases& t, const StateVector& xi,
                                       std::optional<std::array<int, 4>> forced_bits = std::nullopt,
                                       uint64_t seed = 0) {
  if (forced_bits)
    for (int b : *forced_bits)
      if (b < 0 || b > 1) throw std::invalid_argument("run_protocol: forced bits must be 0 or 1");
  std::mt19937_64 rng(seed);
  auto next_outcome = [&](const StateVector& s, Wire w, int slot) {
    int q = wire_index(w);
    return forced_bits ? measure(s, q, (*forced_bits)[slot]) : measure(s, q, rng);
  };

  StateVector state = prepare_channel_state(xi);

  // Receiver entangles the payload pair with his halves of the channel.
  state = apply_gate(state, gates::Gate::CNOT, {wire_index(Wire::Y1), wire_index(Wire::B1)});
  state = apply_gate(state, gates::Gate::CNOT, {wire_index(Wire::Y2), wire_index(Wire::B2)});

  auto [rec_b1, s1] = next_outcome(state, Wire::B1, 0);
  auto [rec_b2, s2] = next_outcome(s1, Wire::B2, 1);
  state = std::move(s2);
  double p_bob = rec_b1.probability * rec_b2.probability;

  // Outcome-conditioned bit flips put Alice's pair into the payload state.
  if (rec_b1.outcome) state = apply_gate(state, gates::Gate::X, {wire_index(Wire::A1)});
  if (rec_b2.outcome) state = apply_gate(state, gates::Gate::X, {wire_index(Wire::A2)});

  // Sender applies the operator locally, then rotates into the X basis.
  state = apply_operator(state, build_T2(x, t).mat(),
                         {wire_index(Wire::A1), wire_index(Wire::A2)});
  state = apply_gate(state, gates::Gate::H, {wire_index(Wire::A1)});
  state = apply_gate(state, gates::Gate::H, {wire_index(Wire::A2)});
  StateVector pre_alice = state;

  auto [rec_a1, s3] = next_outcome(state, Wire::A1, 2);
  auto [rec_a2, s4] = next_outcome(s3, Wire::A2, 3);
  state = std::move(s4);
  double p_alice = rec_a1.probability * rec_a2.probability;

  auto extract_pair = [&](const StateVector& s) {
    Eigen::Index base = ((Eigen::Index)rec_a1.outcome * 32) + (rec_a2.outcome * 16) +
                        (rec_b1.outcome * 8) + (rec_b2.outcome * 4);
    Vector amps(4);
    for (int y = 0; y < 4; ++y) amps(y) = s.amps()(base + y);
    return StateVector::unchecked({2, 2}, std::move(amps));
  };
  StateVector pre_recovery = extract_pair(state);

  state = apply_recovery(state, rec_a1.outcome, rec_a2.outcome, x,
                         std::array<int, 2>{wire_index(Wire::Y1), wire_index(Wire::Y2)});

  return ProtocolTranscript{x,
                            x_bit_string(x),
                            t,
                            xi,
                            {rec_b1.outcome, rec_b2.outcome, rec_a1.outcome, rec_a2.outcome},
                            {rec_b1, rec_b2, rec_a1, rec_a2},
                            p_bob,
                            p_alice,
                            std::move(pre_alice),
                            std::move(pre_recovery),
                            state,
                            extract_pair(state)};
}

}  // namespace rio
