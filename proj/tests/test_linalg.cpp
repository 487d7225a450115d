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

#include <catch2/catch_amalgamated.hpp>

#include "rio/gates.hpp"
#include "rio/linalg.hpp"
#include "test_support.hpp"

using namespace rio;
using riotest::max_abs_diff;

TEST_CASE("kron basics", "[linalg]") {
  const Matrix i2 = Matrix::Identity(2, 2);

  SECTION("identity times identity") {
    REQUIRE(max_abs_diff(kron(i2, i2), Matrix::Identity(4, 4)) == 0.0);
  }

  SECTION("X on the left flips the most significant bit") {
    Vector v00 = Vector::Zero(4);
    v00(0) = 1.0;
    Vector out = kron(gates::pauli_x().mat(), i2) * v00;
    REQUIRE(std::abs(out(2) - 1.0) < 1e-15);
    REQUIRE(out.cwiseAbs().sum() == Catch::Approx(1.0));
  }

  SECTION("associativity is exact on the gate alphabet") {
    const Matrix& h = gates::hadamard().mat();
    const Matrix& x = gates::pauli_x().mat();
    const Matrix& cn = gates::cnot().mat();
    REQUIRE(max_abs_diff(kron(kron(h, x), cn), kron(h, kron(x, cn))) == 0.0);
    REQUIRE(max_abs_diff(kron(kron(cn, h), h), kron(cn, kron(h, h))) == 0.0);
  }

  SECTION("associativity holds to rounding for arbitrary matrices") {
    std::mt19937_64 rng(11);
    Matrix a = riotest::random_hermitian(2, rng);
    Matrix b = riotest::random_hermitian(3, rng);
    Matrix c = riotest::random_hermitian(2, rng);
    REQUIRE(max_abs_diff(kron(kron(a, b), c), kron(a, kron(b, c))) < 1e-14);
  }

  SECTION("oversized products are rejected") {
    Matrix big = Matrix::Identity(70, 70);
    REQUIRE_THROWS_MATCHES(kron(big, big), std::length_error,
                           Catch::Matchers::MessageMatches(
                               Catch::Matchers::ContainsSubstring("space too large")));
  }

  SECTION("state product keeps subsystem bookkeeping") {
    StateVector a = StateVector::basis({2}, 1);
    StateVector b = StateVector::basis({3}, 2);
    StateVector ab = kron(a, b);
    REQUIRE(ab.dims() == std::vector<int>{2, 3});
    REQUIRE(std::abs(ab.amps()(5) - 1.0) < 1e-15);
  }
}

TEST_CASE("matrix wrappers validate their inputs", "[linalg]") {
  SECTION("HermitianMatrix accepts Hermitian input") {
    std::mt19937_64 rng(3);
    REQUIRE_NOTHROW(HermitianMatrix(riotest::random_hermitian(5, rng)));
  }

  SECTION("HermitianMatrix rejects non-Hermitian input") {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 1) = 1.0;
    REQUIRE_THROWS_AS(HermitianMatrix(m), std::invalid_argument);
  }

  SECTION("HermitianMatrix rejects non-square input") {
    REQUIRE_THROWS_AS(HermitianMatrix(Matrix::Zero(2, 3)), std::invalid_argument);
  }

  SECTION("UnitaryMatrix accepts gate constants") {
    REQUIRE_NOTHROW(UnitaryMatrix::checked(gates::hadamard().mat()));
  }

  SECTION("UnitaryMatrix rejects a non-unitary matrix") {
    Matrix m = Matrix::Identity(3, 3);
    m(0, 0) = 2.0;
    REQUIRE_THROWS_AS(UnitaryMatrix::checked(m), std::invalid_argument);
  }

  SECTION("non-finite entries are rejected everywhere") {
    Matrix m = Matrix::Identity(2, 2);
    m(1, 1) = std::numeric_limits<double>::quiet_NaN();
    REQUIRE_THROWS_AS(HermitianMatrix(m), std::invalid_argument);
    REQUIRE_THROWS_AS(UnitaryMatrix::checked(m), std::invalid_argument);
    REQUIRE_THROWS_AS(UnitaryMatrix::from_evolution(m), std::invalid_argument);
  }
}

TEST_CASE("expm_hermitian", "[linalg]") {
  std::mt19937_64 rng(7);

  SECTION("zero time gives the identity") {
    HermitianMatrix h(riotest::random_hermitian(6, rng));
    REQUIRE(max_abs_diff(expm_hermitian(h, 0.0).mat(), Matrix::Identity(6, 6)) < 1e-12);
  }

  SECTION("a single shifted level picks up exactly the dialed phase") {
    double lambda = 2.5;
    Matrix m = Matrix::Zero(2, 2);
    m(1, 1) = lambda;
    Matrix u = expm_hermitian(HermitianMatrix(m), std::numbers::pi / lambda).mat();
    REQUIRE(std::abs(u(0, 0) - 1.0) < 1e-12);
    REQUIRE(std::abs(u(1, 1) + 1.0) < 1e-12);
    REQUIRE(std::abs(u(0, 1)) < 1e-15);
  }

  SECTION("result is unitary for random Hermitian input") {
    for (int trial = 0; trial < 20; ++trial) {
      Matrix u = expm_hermitian(HermitianMatrix(riotest::random_hermitian(8, rng)), 0.7).mat();
      REQUIRE(max_abs_diff(u.adjoint() * u, Matrix::Identity(8, 8)) < 1e-10);
    }
  }

  SECTION("time composes additively") {
    HermitianMatrix h(riotest::random_hermitian(7, rng));
    Matrix lhs = expm_hermitian(h, 0.3).mat() * expm_hermitian(h, 1.1).mat();
    REQUIRE(max_abs_diff(lhs, expm_hermitian(h, 1.4).mat()) < 1e-10);
  }

  SECTION("non-finite time is rejected") {
    HermitianMatrix h(Matrix::Zero(2, 2));
    REQUIRE_THROWS_AS(expm_hermitian(h, std::numeric_limits<double>::infinity()),
                      std::invalid_argument);
  }
}

TEST_CASE("StateVector construction", "[linalg]") {
  SECTION("amplitudes are normalized on construction") {
    Vector v(4);
    v << 3.0, 0.0, 4.0, 0.0;
    StateVector s({2, 2}, v);
    REQUIRE(s.norm() == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(std::abs(s.amps()(0) - 0.6) < 1e-12);
  }

  SECTION("the zero vector is rejected") {
    REQUIRE_THROWS_AS(StateVector({2}, Vector::Zero(2)), std::invalid_argument);
  }

  SECTION("amplitude count must match the space") {
    REQUIRE_THROWS_AS(StateVector({2, 2}, Vector::Ones(3)), std::invalid_argument);
  }

  SECTION("subsystem dimensions below two are rejected") {
    REQUIRE_THROWS_AS(StateVector({1, 4}, Vector::Ones(4)), std::invalid_argument);
  }

  SECTION("register size is capped") {
    std::vector<int> dims(13, 2);
    REQUIRE_THROWS_MATCHES(StateVector::basis(dims, 0), std::length_error,
                           Catch::Matchers::MessageMatches(
                               Catch::Matchers::ContainsSubstring("space too large")));
  }

  SECTION("basis states") {
    StateVector s = StateVector::basis({2, 3}, 4);
    REQUIRE(std::abs(s.amps()(4) - 1.0) == 0.0);
    REQUIRE_THROWS_AS(StateVector::basis({2, 2}, 4), std::invalid_argument);
  }
}

TEST_CASE("fidelity", "[linalg]") {
  std::mt19937_64 rng(19);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto random_state = [&](std::vector<int> dims) {
    Eigen::Index n = 1;
    for (int d : dims) n *= d;
    Vector v(n);
    for (Eigen::Index k = 0; k < n; ++k) v(k) = cxd(gauss(rng), gauss(rng));
    return StateVector(std::move(dims), std::move(v));
  };

  SECTION("self fidelity is one") {
    StateVector s = random_state({2, 2});
    REQUIRE(fidelity(s, s) == Catch::Approx(1.0).margin(1e-12));
  }

  SECTION("global phase is invisible") {
    StateVector s = random_state({2, 2});
    StateVector rotated({2, 2}, std::exp(cxd(0.0, 1.234)) * s.amps());
    REQUIRE(fidelity(s, rotated) == Catch::Approx(1.0).margin(1e-12));
  }

  SECTION("orthogonal states score zero") {
    REQUIRE(fidelity(StateVector::basis({2}, 0), StateVector::basis({2}, 1)) == 0.0);
  }

  SECTION("mismatched spaces are rejected") {
    REQUIRE_THROWS_AS(fidelity(StateVector::basis({4}, 0), StateVector::basis({2, 2}, 0)),
                      std::invalid_argument);
  }

  SECTION("invariant under a shared unitary rotation") {
    StateVector a = random_state({2, 2});
    StateVector b = random_state({2, 2});
    Matrix u = riotest::random_unitary(4, rng);
    StateVector ua = StateVector::unchecked({2, 2}, u * a.amps());
    StateVector ub = StateVector::unchecked({2, 2}, u * b.amps());
    REQUIRE(fidelity(ua, ub) == Catch::Approx(fidelity(a, b)).margin(1e-12));
  }
}

TEST_CASE("global_phase_align", "[linalg]") {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector raw(4);
  for (int k = 0; k < 4; ++k) raw(k) = cxd(gauss(rng), gauss(rng));
  StateVector psi({2, 2}, raw);

  SECTION("identical states align at phase one") {
    auto [phase, residual] = global_phase_align(psi, psi);
    REQUIRE(std::abs(phase - cxd(1.0, 0.0)) < 1e-12);
    REQUIRE(residual < 1e-12);
  }

  SECTION("negated states align at phase minus one") {
    StateVector neg = StateVector::unchecked({2, 2}, -psi.amps());
    auto [phase, residual] = global_phase_align(psi, neg);
    REQUIRE(std::abs(phase + cxd(1.0, 0.0)) < 1e-12);
    REQUIRE(residual < 1e-12);
  }

  SECTION("an arbitrary phase is recovered") {
    cxd rot = std::exp(cxd(0.0, -2.03));
    StateVector rotated = StateVector::unchecked({2, 2}, rot * psi.amps());
    auto [phase, residual] = global_phase_align(psi, rotated);
    REQUIRE(std::abs(phase * rot - cxd(1.0, 0.0)) < 1e-12);
    REQUIRE(residual < 1e-12);
  }

  SECTION("residual of a slightly perturbed state matches direct arithmetic") {
    StateVector a = StateVector::basis({2}, 0);
    Vector mix(2);
    mix << 1.0, 0.01;
    StateVector b({2}, mix);
    // For unit vectors the aligned distance satisfies r^2 = 2 - 2|<a|b>|.
    double overlap = 1.0 / std::sqrt(1.0001);
    double expected = std::sqrt(2.0 - 2.0 * overlap);
    REQUIRE(global_phase_align(a, b).residual == Catch::Approx(expected).margin(1e-12));
  }

  SECTION("orthogonal inputs cannot align") {
    REQUIRE_THROWS_MATCHES(
        global_phase_align(StateVector::basis({2}, 0), StateVector::basis({2}, 1)),
        std::invalid_argument,
        Catch::Matchers::MessageMatches(Catch::Matchers::ContainsSubstring("no alignment")));
  }
}
