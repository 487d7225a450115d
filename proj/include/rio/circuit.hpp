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

#include <algorithm>
#include <optional>
#include <random>
#include <utility>

#include "rio/gates.hpp"
#include "rio/linalg.hpp"

namespace rio {

namespace detail {

inline std::vector<Eigen::Index> strides(const std::vector<int>& dims) {
  std::vector<Eigen::Index> s(dims.size());
  Eigen::Index acc = 1;
  for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
    s[k] = acc;
    acc *= dims[k];
  }
  return s;
}

inline void check_targets(const std::vector<int>& dims, const std::vector<int>& targets) {
  if (targets.empty()) throw std::invalid_argument("apply_operator: no targets");
  for (size_t i = 0; i < targets.size(); ++i) {
    if (targets[i] < 0 || targets[i] >= static_cast<int>(dims.size()))
      throw std::invalid_argument("apply_operator: target out of range");
    for (size_t j = i + 1; j < targets.size(); ++j)
      if (targets[i] == targets[j]) throw std::invalid_argument("apply_operator: duplicate target");
  }
}

}  // namespace detail

/// Applies a square operator to the listed subsystems, identity elsewhere.
/// targets[0] owns the operator's most significant digit. Amplitudes pass
/// through untouched outside the target slice, so unitary ops preserve the
/// norm to machine precision.
inline StateVector apply_operator(const StateVector& s, const Matrix& op,
                                  const std::vector<int>& targets) {
  const auto& dims = s.dims();
  detail::check_targets(dims, targets);
  if (op.rows() != op.cols()) throw std::invalid_argument("apply_operator: operator not square");
  if (!detail::all_finite(op)) throw std::invalid_argument("apply_operator: non-finite operator");
  Eigen::Index tprod = 1;
  for (int t : targets) tprod *= dims[t];
  if (op.rows() != tprod)
    throw std::invalid_argument("apply_operator: operator size " + std::to_string(op.rows()) +
                                " does not match target space " + std::to_string(tprod));

  auto stride = detail::strides(dims);
  // Offset of each target-space basis index within the composite index.
  std::vector<Eigen::Index> toff(tprod);
  for (Eigen::Index t = 0; t < tprod; ++t) {
    Eigen::Index rem = t, off = 0;
    for (int k = static_cast<int>(targets.size()) - 1; k >= 0; --k) {
      int d = dims[targets[k]];
      off += (rem % d) * stride[targets[k]];
      rem /= d;
    }
    toff[t] = off;
  }

  std::vector<int> rest;
  for (int k = 0; k < s.subsystems(); ++k)
    if (std::find(targets.begin(), targets.end(), k) == targets.end()) rest.push_back(k);

  Vector out = Vector::Zero(s.dim());
  Vector slice(tprod);
  std::vector<int> digit(rest.size(), 0);
  while (true) {
    Eigen::Index base = 0;
    for (size_t k = 0; k < rest.size(); ++k) base += digit[k] * stride[rest[k]];
    for (Eigen::Index t = 0; t < tprod; ++t) slice(t) = s.amps()(base + toff[t]);
    slice = op * slice;
    for (Eigen::Index t = 0; t < tprod; ++t) out(base + toff[t]) = slice(t);
    int k = static_cast<int>(rest.size()) - 1;
    while (k >= 0 && ++digit[k] == dims[rest[k]]) digit[k--] = 0;
    if (k < 0) break;
  }
  return StateVector::unchecked(dims, std::move(out));
}

inline StateVector apply_gate(const StateVector& s, gates::Gate g, const std::vector<int>& targets) {
  if (static_cast<int>(targets.size()) != gates::gate_arity(g))
    throw std::invalid_argument("apply_gate: wrong target count for gate");
  for (int t : targets)
    if (t < 0 || t >= s.subsystems() || s.dims()[t] != 2)
      throw std::invalid_argument("apply_gate: gate targets must be qubits");
  return apply_operator(s, gates::gate_matrix(g).mat(), targets);
}

struct MeasurementRecord {
  int subsystem;
  int outcome;
  double probability;
};

inline double outcome_probability(const StateVector& s, int subsystem, int outcome) {
  if (subsystem < 0 || subsystem >= s.subsystems())
    throw std::invalid_argument("outcome_probability: subsystem out of range");
  if (outcome < 0 || outcome >= s.dims()[subsystem])
    throw std::invalid_argument("outcome_probability: outcome out of range");
  auto stride = detail::strides(s.dims());
  int d = s.dims()[subsystem];
  double p = 0.0;
  for (Eigen::Index i = 0; i < s.dim(); ++i)
    if ((i / stride[subsystem]) % d == outcome) p += std::norm(s.amps()(i));
  return p;
}

namespace detail {

inline StateVector project(const StateVector& s, int subsystem, int outcome, double p) {
  auto stride = strides(s.dims());
  int d = s.dims()[subsystem];
  Vector out = Vector::Zero(s.dim());
  double scale = 1.0 / std::sqrt(p);
  for (Eigen::Index i = 0; i < s.dim(); ++i)
    if ((i / stride[subsystem]) % d == outcome) out(i) = s.amps()(i) * scale;
  return StateVector::unchecked(s.dims(), std::move(out));
}

}  // namespace detail

/// Projective measurement with the outcome dictated by the caller. Throws if
/// the requested branch carries no probability.
inline std::pair<MeasurementRecord, StateVector> measure(const StateVector& s, int subsystem,
                                                         int outcome) {
  double p = outcome_probability(s, subsystem, outcome);
  if (p < 1e-14)
    throw std::domain_error("measure: forced outcome " + std::to_string(outcome) +
                            " on subsystem " + std::to_string(subsystem) +
                            " has zero probability");
  return {MeasurementRecord{subsystem, outcome, p}, detail::project(s, subsystem, outcome, p)};
}

/// Projective measurement sampled from the outcome distribution.
inline std::pair<MeasurementRecord, StateVector> measure(const StateVector& s, int subsystem,
                                                         std::mt19937_64& rng) {
  if (subsystem < 0 || subsystem >= s.subsystems())
    throw std::invalid_argument("measure: subsystem out of range");
  int d = s.dims()[subsystem];
  std::vector<double> probs(d);
  for (int o = 0; o < d; ++o) probs[o] = outcome_probability(s, subsystem, o);
  double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  double acc = 0.0;
  int outcome = d - 1;
  for (int o = 0; o < d; ++o) {
    acc += probs[o];
    if (u < acc) {
      outcome = o;
      break;
    }
  }
  while (probs[outcome] < 1e-14) --outcome;  // guard against rounding at the tail
  return {MeasurementRecord{subsystem, outcome, probs[outcome]},
          detail::project(s, subsystem, outcome, probs[outcome])};
}

struct Branch {
  std::vector<int> outcomes;  ///< one entry per measured subsystem, in call order
  double probability;
  bool reachable;                  ///< false when probability is numerically zero
  std::optional<StateVector> state;  ///< normalized post-measurement state when reachable
};

/// All joint outcomes of measuring the listed subsystems, in lexicographic
/// order (first subsystem most significant). Probabilities sum to 1.
inline std::vector<Branch> enumerate_branches(const StateVector& s,
                                              const std::vector<int>& targets) {
  detail::check_targets(s.dims(), targets);
  auto stride = detail::strides(s.dims());
  Eigen::Index count = 1;
  for (int t : targets) count *= s.dims()[t];
  std::vector<Branch> branches;
  branches.reserve(count);
  for (Eigen::Index b = 0; b < count; ++b) {
    std::vector<int> outcomes(targets.size());
    Eigen::Index rem = b;
    for (int k = static_cast<int>(targets.size()) - 1; k >= 0; --k) {
      outcomes[k] = static_cast<int>(rem % s.dims()[targets[k]]);
      rem /= s.dims()[targets[k]];
    }
    double p = 0.0;
    Vector post = Vector::Zero(s.dim());
    for (Eigen::Index i = 0; i < s.dim(); ++i) {
      bool match = true;
      for (size_t k = 0; k < targets.size(); ++k)
        if ((i / stride[targets[k]]) % s.dims()[targets[k]] != outcomes[k]) {
          match = false;
          break;
        }
      if (match) {
        p += std::norm(s.amps()(i));
        post(i) = s.amps()(i);
      }
    }
    Branch br{std::move(outcomes), p, p >= 1e-14, std::nullopt};
    if (br.reachable)
      br.state = StateVector::unchecked(s.dims(), post / std::sqrt(p));
    branches.push_back(std::move(br));
  }
  return branches;
}

}  // namespace rio
