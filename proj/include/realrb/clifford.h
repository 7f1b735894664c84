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

#ifndef REALRB_CLIFFORD_H_
#define REALRB_CLIFFORD_H_

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "realrb/f2.h"

namespace realrb {

using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;

/// Dense matrices are indexed with qubit 0 as the most significant bit.
inline size_t qubit_bit(int n, int qubit) { return size_t{1} << (n - 1 - qubit); }

/// Hermitian Pauli operator P(x) = i^{Q(x)} (X^{q_1} Z^{p_1}) (x) ... (x) (X^{q_n} Z^{p_n}).
ComplexMatrix hermitian_pauli(const PhaseVector& x);

/// Element sign * X^q Z^p of the real Pauli group E(n).
struct PauliLabel {
  PhaseVector x;
  int sign = 1;

  static PauliLabel identity(int n) { return {PhaseVector::zero(n), 1}; }
  RealMatrix real_matrix() const;
  /// Sign followed by the p|q bits, e.g. "-10|01".
  std::string str() const;
  friend bool operator==(const PauliLabel&, const PauliLabel&) = default;
};

/// Identifies a real matrix as +-X^q Z^p, or nullopt if it is not one (tolerance 1e-9).
std::optional<PauliLabel> extract_real_pauli(const RealMatrix& m);

enum class GateKind { kZ, kX, kH, kCZ, kCNOT };

struct Gate {
  GateKind kind;
  int a;       // target, or control for CNOT
  int b = -1;  // second qubit for CZ, target for CNOT

  std::string str() const;
  friend bool operator==(const Gate&, const Gate&) = default;
};

/// Left-multiplies `u` by the gate's matrix in place. O(d^2) per gate.
void apply_gate_left(RealMatrix& u, const Gate& g, int n);

/// Gates in time order; the realized operator is g_k ... g_2 g_1.
struct GateSequence {
  int n = 0;
  std::vector<Gate> gates;

  RealMatrix dense() const;
  std::string str() const;
};

/// Gate sequence whose unitary U satisfies U P(x) U^T = +-P(S x).
///
/// Gaussian elimination over F_2: S is reduced to the identity qubit by qubit
/// with H, CZ and CNOT row operations and the reducing gates are emitted in
/// reverse. Throws std::invalid_argument if S is not in O+(2n,2).
GateSequence synthesize_clifford(const BinaryMatrix2n& s);

/// Image of x under conjugation by a real Clifford: U P(x) U^T = sign * P(y).
/// Returns nullopt if the conjugate is not +-P(y) for a single y.
std::optional<PauliLabel> conjugate_pauli(const RealMatrix& u, const PhaseVector& x);

/// Symplectic label of a real Clifford matrix, read off from the conjugation
/// action on the 2n unit vectors. Throws std::domain_error if `u` does not
/// normalize the Pauli group.
BinaryMatrix2n symplectic_of(const RealMatrix& u, int n);

/// Element of the real Clifford group C(n), represented up to global sign.
///
/// `dense` equals pauli.real_matrix() * synthesize_clifford(symplectic).dense(),
/// and `circuit` realizes `dense` up to global sign.
struct RealCliffordElement {
  BinaryMatrix2n symplectic;
  PauliLabel pauli;
  RealMatrix dense;
  GateSequence circuit;

  int n() const { return symplectic.n(); }

  static RealCliffordElement identity(int n);
  /// Builds the element from its symplectic label and a Pauli correction.
  static RealCliffordElement from_parts(const BinaryMatrix2n& s, const PauliLabel& pauli);
  /// Recovers the Pauli correction of a dense real Clifford with known label.
  static RealCliffordElement from_dense(const RealMatrix& dense, const BinaryMatrix2n& s);
};

/// Default cap on qubits for dense storage (d = 2^n).
inline constexpr int kDenseQubitCap = 10;

RealCliffordElement sample_real_clifford(int n, Rng& rng, int max_qubits = kDenseQubitCap);
RealCliffordElement compose(const RealCliffordElement& a, const RealCliffordElement& b);
RealCliffordElement inverse(const RealCliffordElement& a);

/// Single-qubit and two-qubit generator matrices embedded in n qubits.
RealMatrix gate_matrix(const Gate& g, int n);
/// Z_i, H_i for every qubit and CZ_ij for every pair.
std::vector<RealMatrix> real_clifford_generators(int n);
/// X_i, Z_i for every qubit.
std::vector<RealMatrix> real_pauli_generators(int n);

/// Multiplicative closure of `generators`, equality tested to 1e-9.
/// Throws std::length_error when the closure exceeds `cap` elements.
std::vector<RealMatrix> enumerate_closure(const std::vector<RealMatrix>& generators, size_t cap);

}  // namespace realrb

#endif  // REALRB_CLIFFORD_H_
