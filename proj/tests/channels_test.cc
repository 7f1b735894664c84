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

#include "realrb/channels.h"

#include "gtest/gtest.h"
#include "oracles.h"

using namespace realrb;
using cd = std::complex<double>;

TEST(vec, round_trip_and_layout) {
  ComplexMatrix x(2, 2);
  x << 1, 2, 3, 4;
  auto v = vec(x);
  EXPECT_EQ(v(1), cd(3));  // column stacking
  EXPECT_EQ(unvec(v, 2), x);
}

TEST(density_matrix, validation) {
  EXPECT_NO_THROW(DensityMatrix::basis_state(4, 2));
  ComplexMatrix bad = ComplexMatrix::Identity(2, 2);
  EXPECT_THROW(DensityMatrix::from_matrix(bad), std::invalid_argument);
  ComplexMatrix neg(2, 2);
  neg << 1.5, 0, 0, -0.5;
  EXPECT_THROW(DensityMatrix::from_matrix(neg), std::invalid_argument);
}

TEST(channel, kraus_and_superop_agree) {
  Rng rng(1);
  auto t = random_cptp(4, 3, rng);
  EXPECT_TRUE(t.is_cptp());
  ComplexMatrix rho = DensityMatrix::basis_state(4, 1).matrix();
  ComplexMatrix direct = ComplexMatrix::Zero(4, 4);
  for (const auto& k : t.kraus) direct += k * rho * k.adjoint();
  EXPECT_LT((t.apply(rho) - direct).norm(), 1e-12);
}

TEST(channel, adjoint_duality) {
  Rng rng(2);
  auto t = random_cptp(2, 2, rng);
  ComplexMatrix rho = DensityMatrix::pure(Eigen::Vector2cd(cd(0.6), cd(0, 0.8))).matrix();
  ComplexMatrix e = ComplexMatrix::Identity(2, 2) * 0.3;
  e(0, 1) = e(1, 0) = 0.1;
  EXPECT_NEAR((e * t.apply(rho)).trace().real(), (t.apply_adjoint(e) * rho).trace().real(), 1e-12);
}

TEST(channel, rejects_incomplete_kraus) {
  EXPECT_THROW(Channel::from_kraus({ComplexMatrix::Identity(2, 2) * 0.5}), std::invalid_argument);
}

TEST(channel, transposition_is_not_cp) {
  EXPECT_FALSE(Channel::transposition(2).is_cptp());
  EXPECT_TRUE(Channel::completely_depolarizing(3).is_cptp());
}

TEST(channel, composition_order) {
  // Amplitude damping then X flip versus the reverse give different states.
  auto ad = amplitude_damping(1, 1.0);
  auto x = Channel::unitary(pauli_string_matrix("X"));
  ComplexMatrix one = DensityMatrix::basis_state(2, 1).matrix();
  EXPECT_NEAR(then(ad, x).apply(one)(1, 1).real(), 1.0, 1e-12);
  EXPECT_NEAR(then(x, ad).apply(one)(0, 0).real(), 1.0, 1e-12);
}

TEST(projectors, are_orthogonal_and_complete) {
  for (Eigen::Index d : {2, 4}) {
    auto p = projectors(d);
    ComplexMatrix sum = p.p0 + p.p1 + p.p2;
    EXPECT_LT((sum - ComplexMatrix::Identity(d * d, d * d)).norm(), 1e-12);
    EXPECT_LT((p.p0 * p.p1).norm(), 1e-12);
    EXPECT_LT((p.p1 * p.p2).norm(), 1e-12);
    EXPECT_NEAR(p.p1.trace().real(), d * (d - 1) / 2.0, 1e-12);
    EXPECT_NEAR(p.p2.trace().real(), d * (d + 1) / 2.0 - 1, 1e-12);
  }
}

TEST(twirl, identity_transposition_depolarizing) {
  auto id = twirl_analytic(Channel::identity(2));
  EXPECT_NEAR(id.a, 1, 1e-12);
  EXPECT_NEAR(id.b, 1, 1e-12);
  EXPECT_NEAR(id.c, 1, 1e-12);
  auto tr = twirl_analytic(Channel::transposition(2));
  EXPECT_NEAR(tr.b, 1, 1e-12);
  EXPECT_NEAR(tr.c, -1, 1e-12);
  for (double p : {0.9, 0.99, 0.5}) {
    auto dep = twirl_analytic(depolarizing(2, p));
    EXPECT_NEAR(dep.a, 1, 1e-12);
    EXPECT_NEAR(dep.b, p, 1e-12);
    EXPECT_NEAR(dep.c, p, 1e-12);
  }
}

TEST(twirl, y_rotation_only_touches_symmetric_sector) {
  const double eps = 0.05;
  auto t = twirl_analytic(coherent(1, "Y", eps));
  EXPECT_NEAR(t.b, std::cos(2 * eps), 1e-12);
  EXPECT_NEAR(t.c, 1, 1e-12);
}

TEST(twirl, analytic_matches_basis_oracle) {
  Rng rng(3);
  for (Eigen::Index d : {2, 4, 8}) {
    for (int rep = 0; rep < 5; rep++) {
      auto t = random_cptp(d, 1 + rep, rng);
      auto c = twirl_analytic(t);
      EXPECT_NEAR(c.b, oracle::twirl_b(t), 1e-10);
      EXPECT_NEAR(c.c, oracle::twirl_c(t), 1e-10);
      EXPECT_NEAR(c.a, 1, 1e-10);
    }
  }
  auto mixed = composite({depolarizing(2, 0.99), coherent(2, "Y", 0.05), amplitude_damping(2, 0.03)});
  EXPECT_NEAR(twirl_analytic(mixed).b, oracle::twirl_b(mixed), 1e-10);
  EXPECT_NEAR(twirl_analytic(mixed).c, oracle::twirl_c(mixed), 1e-10);
}

TEST(twirl, coefficient_bases_agree) {
  auto x = TwirlCoefficients::from_abc(1, 0.9, 0.8, 4);
  auto y = TwirlCoefficients::from_alpha_beta_gamma(x.alpha, x.beta, x.gamma, 4);
  EXPECT_NEAR(y.a, 1, 1e-12);
  EXPECT_NEAR(y.b, 0.9, 1e-12);
  EXPECT_NEAR(y.c, 0.8, 1e-12);
}

TEST(twirl, group_average_matches_analytic) {
  Rng rng(4);
  auto group = oracle::one_qubit_real_cliffords();
  for (int rep = 0; rep < 5; rep++) {
    auto t = random_cptp(2, 2, rng);
    auto avg = twirl_average(t, group);
    auto analytic = twirled_channel(twirl_analytic(t));
    EXPECT_LT((avg.superop - analytic.superop).norm(), 1e-10);
  }
}

TEST(twirl, twirled_channel_is_fixed_point) {
  Rng rng(5);
  auto t = random_cptp(4, 2, rng);
  auto once = twirled_channel(twirl_analytic(t));
  auto twice = twirled_channel(twirl_analytic(once));
  EXPECT_LT((once.superop - twice.superop).norm(), 1e-10);
}

TEST(twirl, power_apply) {
  auto c = TwirlCoefficients::from_abc(1, 0.9, 0.7, 2);
  ComplexMatrix y = pauli_string_matrix("Y");
  ComplexMatrix z = pauli_string_matrix("Z");
  EXPECT_LT((twirled_power_apply(c, 3, y) - std::pow(0.7, 3) * y).norm(), 1e-12);
  EXPECT_LT((twirled_power_apply(c, 3, z) - std::pow(0.9, 3) * z).norm(), 1e-12);
}

TEST(noise, parameter_checks) {
  EXPECT_THROW(depolarizing(1, 1.5), std::invalid_argument);
  EXPECT_THROW(depolarizing(1, -0.5), std::invalid_argument);
  EXPECT_NO_THROW(depolarizing(1, -1.0 / 3));
  EXPECT_THROW(dephasing(1, -0.1), std::invalid_argument);
  EXPECT_THROW(amplitude_damping(2, 1.1), std::invalid_argument);
  EXPECT_THROW(coherent(2, "Q", 0.1), std::invalid_argument);
  EXPECT_THROW(coherent(2, "XYZ", 0.1), std::invalid_argument);
  for (const auto& ch : {depolarizing(2, 0.9), dephasing(2, 0.1), amplitude_damping(2, 0.2), coherent(2, "XY", 0.3)}) {
    EXPECT_TRUE(ch.is_cptp());
  }
}

TEST(noise, dephasing_twirl) {
  // Z dephasing keeps diagonals, scales off-diagonals by 1-2g.
  const double g = 0.1;
  auto t = twirl_analytic(dephasing(1, g));
  EXPECT_NEAR(t.b, oracle::twirl_b(dephasing(1, g)), 1e-12);
  EXPECT_NEAR(t.c, 1 - 2 * g, 1e-12);
}

TEST(fidelity, formulas_at_depolarizing) {
  for (double p : {1.0, 0.99, 0.9}) {
    EXPECT_NEAR(avg_fidelity_from_bc(p, p, 2), (1 + p) / 2, 1e-12);
    EXPECT_NEAR(rebit_fidelity_from_b(p, 2), (1 + p) / 2, 1e-12);
  }
}

TEST(fidelity, average_formula_matches_oracle) {
  Rng rng(6);
  for (Eigen::Index d : {2, 4}) {
    for (int rep = 0; rep < 4; rep++) {
      auto t = random_cptp(d, 2, rng);
      auto c = twirl_analytic(t);
      EXPECT_NEAR(avg_fidelity_from_bc(c.b, c.c, d), oracle::average_fidelity(t), 1e-10);
    }
  }
}

TEST(haar, samplers_are_unitary) {
  Rng rng(7);
  auto u = haar_unitary(4, rng);
  EXPECT_LT((u * u.adjoint() - ComplexMatrix::Identity(4, 4)).norm(), 1e-12);
  auto o = haar_orthogonal(4, rng);
  EXPECT_LT((o * o.transpose() - RealMatrix::Identity(4, 4)).norm(), 1e-12);
}

TEST(haar, fidelity_monte_carlo) {
  Rng rng(8);
  auto t = coherent(1, "Y", 0.2);
  auto c = twirl_analytic(t);
  auto unitary = haar_fidelity_oracle(t, HaarEnsemble::kUnitary, 20000, rng);
  auto orthogonal = haar_fidelity_oracle(t, HaarEnsemble::kOrthogonal, 20000, rng);
  EXPECT_NEAR(unitary.mean, avg_fidelity_from_bc(c.b, c.c, 2), 4 * unitary.std_error + 1e-12);
  EXPECT_NEAR(orthogonal.mean, rebit_fidelity_from_b(c.b, 2), 4 * orthogonal.std_error + 1e-12);
}
