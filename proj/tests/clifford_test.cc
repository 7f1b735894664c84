// Copyright 2026 The RealRB Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "realrb/clifford.h"

#include <bit>

#include "gtest/gtest.h"
#include "oracles.h"

using namespace realrb;

namespace {

// U P(x) U^T == +-P(S x) for every unit x, with P from the test oracle.
bool conjugation_matches(const RealMatrix& u, const BinaryMatrix2n& s) {
  const int n = s.n();
  ComplexMatrix uc = u.cast<std::complex<double>>();
  for (int k = 0; k < 2 * n; k++) {
    auto x = PhaseVector::unit(n, k);
    ComplexMatrix lhs = uc * oracle::pauli(x) * uc.transpose();
    ComplexMatrix rhs = oracle::pauli(s.apply(x));
    if ((lhs - rhs).norm() > 1e-9 && (lhs + rhs).norm() > 1e-9) return false;
  }
  return true;
}

bool orthogonal(const RealMatrix& u) {
  return (u * u.transpose() - RealMatrix::Identity(u.rows(), u.cols())).norm() < 1e-10;
}

}  // namespace

TEST(pauli, hermitian_matches_oracle_up_to_sign) {
  // The phase is i^{Q(x)} with Q reduced mod 2, so it differs from the
  // oracle's i^{#Y} by -1 when #Y = 2 mod 4. Both are Hermitian involutions.
  for (int n = 1; n <= 3; n++) {
    const auto d = Eigen::Index{1} << n;
    for (uint64_t a = 0; a < (uint64_t{1} << (2 * n)); a++) {
      auto x = PhaseVector::from_flat(n, a);
      ComplexMatrix p = hermitian_pauli(x);
      const int y_count = std::popcount(x.p & x.q);
      const double sign = (y_count % 4 >= 2) ? -1 : 1;
      EXPECT_LT((p - sign * oracle::pauli(x)).norm(), 1e-12) << x.str();
      EXPECT_LT((p - p.adjoint()).norm(), 1e-12);
      EXPECT_LT((p * p - ComplexMatrix::Identity(d, d)).norm(), 1e-12);
    }
  }
}

TEST(pauli, real_matrix_and_extraction) {
  for (uint64_t a = 0; a < 16; a++) {
    for (int sign : {1, -1}) {
      PauliLabel l{PhaseVector::from_flat(2, a), sign};
      RealMatrix m = l.real_matrix();
      EXPECT_TRUE(orthogonal(m));
      auto back = extract_real_pauli(m);
      ASSERT_TRUE(back.has_value());
      EXPECT_EQ(*back, l);
    }
  }
  RealMatrix h = oracle::hadamard();
  EXPECT_FALSE(extract_real_pauli(h).has_value());
}

TEST(gates, single_qubit_transforms) {
  // H swaps X and Z.
  RealMatrix h = gate_matrix({GateKind::kH, 0}, 1);
  EXPECT_EQ(symplectic_of(h, 1), BinaryMatrix2n::from_rows({{0, 1}, {1, 0}}));
  // Z fixes the label.
  EXPECT_EQ(symplectic_of(gate_matrix({GateKind::kZ, 0}, 1), 1), BinaryMatrix2n::identity(1));
}

TEST(gates, cnot_transform) {
  // CNOT 0->1: X0 -> X0 X1, Z1 -> Z0 Z1. Layout (p0, p1, q0, q1).
  RealMatrix u = gate_matrix({GateKind::kCNOT, 0, 1}, 2);
  auto s = symplectic_of(u, 2);
  EXPECT_EQ(s.apply(PhaseVector::unit_q(2, 0)), (PhaseVector{2, 0, 3}));
  EXPECT_EQ(s.apply(PhaseVector::unit_p(2, 1)), (PhaseVector{2, 3, 0}));
  EXPECT_EQ(s.apply(PhaseVector::unit_p(2, 0)), PhaseVector::unit_p(2, 0));
  EXPECT_TRUE(conjugation_matches(u, s));
}

TEST(gates, cz_transform) {
  RealMatrix u = gate_matrix({GateKind::kCZ, 0, 1}, 2);
  auto s = symplectic_of(u, 2);
  // X0 -> X0 Z1.
  EXPECT_EQ(s.apply(PhaseVector::unit_q(2, 0)), (PhaseVector{2, 2, 1}));
  EXPECT_TRUE(conjugation_matches(u, s));
}

TEST(gates, dense_uses_msb_for_qubit_zero) {
  RealMatrix x0 = gate_matrix({GateKind::kX, 0}, 2);
  // X on qubit 0 maps |00> (index 0) to |10> (index 2).
  EXPECT_EQ(x0(2, 0), 1.0);
}

TEST(synthesis, identity_is_empty) {
  EXPECT_TRUE(synthesize_clifford(BinaryMatrix2n::identity(3)).gates.empty());
}

TEST(synthesis, rejects_non_members) {
  EXPECT_THROW(synthesize_clifford(BinaryMatrix2n::from_rows({{1, 0}, {1, 1}})), std::invalid_argument);
}

TEST(synthesis, all_of_oplus_4) {
  for (const auto& s : enumerate_oplus(2)) {
    RealMatrix u = synthesize_clifford(s).dense();
    ASSERT_TRUE(orthogonal(u));
    EXPECT_EQ(symplectic_of(u, 2), s);
    EXPECT_TRUE(conjugation_matches(u, s));
  }
}

TEST(synthesis, random_sound_up_to_six_qubits) {
  Rng rng(11);
  for (int n = 1; n <= 6; n++) {
    for (int rep = 0; rep < 30; rep++) {
      auto s = sample_oplus(n, rng);
      auto seq = synthesize_clifford(s);
      RealMatrix u = seq.dense();
      ASSERT_TRUE(orthogonal(u));
      ASSERT_TRUE(conjugation_matches(u, s)) << "n=" << n;
    }
  }
}

TEST(synthesis, homomorphism) {
  Rng rng(12);
  for (int rep = 0; rep < 20; rep++) {
    auto a = sample_oplus(3, rng), b = sample_oplus(3, rng);
    RealMatrix uv = synthesize_clifford(a).dense() * synthesize_clifford(b).dense();
    EXPECT_EQ(symplectic_of(uv, 3), a * b);
  }
}

TEST(element, compose_inverse) {
  Rng rng(13);
  for (int n = 1; n <= 4; n++) {
    auto a = sample_real_clifford(n, rng);
    auto b = sample_real_clifford(n, rng);
    auto ab = compose(a, b);
    EXPECT_LT((ab.dense - a.dense * b.dense).norm(), 1e-10);
    EXPECT_EQ(ab.symplectic, a.symplectic * b.symplectic);
    auto id = compose(a, inverse(a));
    EXPECT_LT((id.dense - RealMatrix::Identity(id.dense.rows(), id.dense.cols())).norm(), 1e-10);
  }
}

TEST(element, circuit_realizes_dense_up_to_sign) {
  Rng rng(14);
  for (int n = 1; n <= 4; n++) {
    for (int rep = 0; rep < 10; rep++) {
      auto e = sample_real_clifford(n, rng);
      RealMatrix c = e.circuit.dense();
      EXPECT_TRUE((c - e.dense).norm() < 1e-10 || (c + e.dense).norm() < 1e-10);
      EXPECT_TRUE(conjugation_matches(e.dense, e.symplectic));
    }
  }
}

TEST(element, sampler_respects_cap) {
  Rng rng(15);
  EXPECT_THROW(sample_real_clifford(kDenseQubitCap + 1, rng), std::invalid_argument);
}

TEST(closure, group_orders) {
  EXPECT_EQ(enumerate_closure(real_clifford_generators(1), 100).size(), 16u);
  EXPECT_EQ(enumerate_closure(real_pauli_generators(1), 100).size(), 8u);
  // |C(2)| = 2 |E(2)|/2 ... = |O+(4,2)| * |E(2)| = 72 * 32.
  EXPECT_EQ(enumerate_closure(real_clifford_generators(2), 5000).size(), 2304u);
  EXPECT_THROW(enumerate_closure(real_clifford_generators(2), 100), std::length_error);
}

TEST(closure, matches_hand_built_group) {
  auto group = enumerate_closure(real_clifford_generators(1), 100);
  for (const auto& g : oracle::one_qubit_real_cliffords()) {
    bool found = false;
    for (const auto& h : group) found = found || (g - h).norm() < 1e-9;
    EXPECT_TRUE(found);
  }
}

TEST(element, uniform_label_distribution) {
  // Each of the 16 one-qubit elements (modulo sign, 8 classes) appears.
  Rng rng(16);
  std::map<std::string, int> counts;
  for (int k = 0; k < 4000; k++) {
    auto e = sample_real_clifford(1, rng);
    counts[e.symplectic.row_strings()[0] + e.symplectic.row_strings()[1] + e.pauli.str()]++;
  }
  EXPECT_EQ(counts.size(), 8u);
  for (const auto& [key, c] : counts) EXPECT_NEAR(c, 500, 100) << key;
}
