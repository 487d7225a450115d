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

#include "rio/linalg.hpp"

namespace rio::gates {

enum class Gate { I, X, Y, Z, H, CNOT };

inline const UnitaryMatrix& identity() {
  static const UnitaryMatrix u = UnitaryMatrix::checked(Matrix::Identity(2, 2));
  return u;
}

inline const UnitaryMatrix& pauli_x() {
  static const UnitaryMatrix u = [] {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return UnitaryMatrix::checked(std::move(m));
  }();
  return u;
}

inline const UnitaryMatrix& pauli_y() {
  static const UnitaryMatrix u = [] {
    Matrix m(2, 2);
    m << cxd(0, 0), cxd(0, -1), cxd(0, 1), cxd(0, 0);
    return UnitaryMatrix::checked(std::move(m));
  }();
  return u;
}

inline const UnitaryMatrix& pauli_z() {
  static const UnitaryMatrix u = [] {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return UnitaryMatrix::checked(std::move(m));
  }();
  return u;
}

inline const UnitaryMatrix& hadamard() {
  static const UnitaryMatrix u = [] {
    double s = 1.0 / std::sqrt(2.0);
    Matrix m(2, 2);
    m << s, s, s, -s;
    return UnitaryMatrix::checked(std::move(m));
  }();
  return u;
}

/// Control is the first (more significant) qubit of the pair the matrix acts on.
inline const UnitaryMatrix& cnot() {
  static const UnitaryMatrix u = [] {
    Matrix m = Matrix::Zero(4, 4);
    m(0, 0) = 1;
    m(1, 1) = 1;
    m(2, 3) = 1;
    m(3, 2) = 1;
    return UnitaryMatrix::checked(std::move(m));
  }();
  return u;
}

inline const UnitaryMatrix& gate_matrix(Gate g) {
  switch (g) {
    case Gate::I: return identity();
    case Gate::X: return pauli_x();
    case Gate::Y: return pauli_y();
    case Gate::Z: return pauli_z();
    case Gate::H: return hadamard();
    case Gate::CNOT: return cnot();
  }
  throw std::invalid_argument("gate_matrix: unknown gate");
}

inline int gate_arity(Gate g) { return g == Gate::CNOT ? 2 : 1; }

inline const char* gate_name(Gate g) {
  switch (g) {
    case Gate::I: return "I";
    case Gate::X: return "X";
    case Gate::Y: return "Y";
    case Gate::Z: return "Z";
    case Gate::H: return "H";
    case Gate::CNOT: return "CNOT";
  }
  return "?";
}

}  // namespace rio::gates
