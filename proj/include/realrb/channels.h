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

#ifndef REALRB_CHANNELS_H_
#define REALRB_CHANNELS_H_

#include <string>
#include <vector>

#include "realrb/clifford.h"

namespace realrb {

/// Column-stacking vectorization: vec(X)[i + d*j] = X(i, j).
Eigen::VectorXcd vec(const ComplexMatrix& x);
ComplexMatrix unvec(const Eigen::VectorXcd& v, Eigen::Index d);

/// Hermitian, unit-trace, positive semidefinite d x d matrix.
class DensityMatrix {
 public:
  /// Validates to the given tolerance; throws std::invalid_argument otherwise.
  static DensityMatrix from_matrix(ComplexMatrix m, double tol = 1e-10);
  /// |psi><psi| for a normalized vector.
  static DensityMatrix pure(const Eigen::VectorXcd& psi);
  static DensityMatrix basis_state(Eigen::Index d, Eigen::Index k);

  const ComplexMatrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }

 private:
  explicit DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {}
  ComplexMatrix m_;
};

/// Linear map on M_d held as its d^2 x d^2 superoperator.
///
/// `kraus` is populated for channels built from Kraus operators; the two
/// representations always describe the same map.
struct Channel {
  Eigen::Index d = 0;
  ComplexMatrix superop;
  std::vector<ComplexMatrix> kraus;
  bool cptp = false;
  std::string label;

  static Channel identity(Eigen::Index d);
  static Channel from_kraus(std::vector<ComplexMatrix> kraus, std::string label = "kraus");
  /// Non-CPTP general linear map.
  static Channel from_superop(ComplexMatrix superop, std::string label = "superop");
  /// rho -> U rho U^dagger.
  static Channel unitary(const ComplexMatrix& u, std::string label = "unitary");
  /// rho -> rho^T (not completely positive).
  static Channel transposition(Eigen::Index d);
  /// rho -> tr[rho] I / d.
  static Channel completely_depolarizing(Eigen::Index d);

  ComplexMatrix apply(const ComplexMatrix& x) const;
  /// Heisenberg-picture action on an effect: tr[E T(rho)] = tr[T^dagger(E) rho].
  ComplexMatrix apply_adjoint(const ComplexMatrix& e) const;

  /// PSD Choi state (eigenvalue floor -tol) with partial trace I/d over the output.
  bool is_cptp(double tol = 1e-9) const;
};

/// `second` after `first`.
Channel then(const Channel& first, const Channel& second);

/// (id (x) T)|Omega><Omega| with |Omega><Omega| = (1/d) sum |ii><jj|.
ComplexMatrix choi(const Channel& t);

/// Flip operator F|ij> = |ji> on C^d (x) C^d.
ComplexMatrix flip_operator(Eigen::Index d);
/// |Omega><Omega|.
ComplexMatrix max_entangled_projector(Eigen::Index d);

struct TwirlProjectors {
  ComplexMatrix p0;  // |Omega><Omega|
  ComplexMatrix p1;  // (I - F)/2, antisymmetric subspace
  ComplexMatrix p2;  // (I + F)/2 - |Omega><Omega|, traceless symmetric
};
TwirlProjectors projectors(Eigen::Index d);

/// Coefficients of the orthogonally twirled channel in two bases:
///   alpha id + beta tr[.] I/d + gamma (tr[.] I - theta)/(d-1)
///   a tr[.] I/d + b (sym(.) - tr[.] I/d) + c antisym(.)
struct TwirlCoefficients {
  double a = 1, b = 1, c = 1;
  double alpha = 1, beta = 0, gamma = 0;
  Eigen::Index d = 2;

  static TwirlCoefficients from_abc(double a, double b, double c, Eigen::Index d);
  static TwirlCoefficients from_alpha_beta_gamma(double alpha, double beta, double gamma, Eigen::Index d);
};

/// Projects the Choi state onto the three commutant projections.
TwirlCoefficients twirl_analytic(const Channel& t);

/// The twirled channel built from its coefficients.
Channel twirled_channel(const TwirlCoefficients& coeffs);

/// (1/K) sum_k O_k^T T(O_k . O_k^T) O_k.
Channel twirl_average(const Channel& t, const std::vector<RealMatrix>& elements);
Channel twirl_average(const Channel& t, const std::vector<RealCliffordElement>& elements);

/// m-fold twirled channel applied to rho (rho need not be a state).
ComplexMatrix twirled_power_apply(const TwirlCoefficients& coeffs, int m, const ComplexMatrix& rho);

// Noise models. Every one of them is CPTP and carries a Kraus list. Models on
// n qubits act identically and independently on each qubit unless noted.

/// p rho + (1 - p) tr[rho] I/d on the full register; p in [-1/(d^2-1), 1].
Channel depolarizing(int n, double p);
/// rho -> (1-g) rho + g Z rho Z on every qubit; g in [0, 1].
Channel dephasing(int n, double g);
/// Amplitude damping with decay probability g on every qubit; g in [0, 1].
Channel amplitude_damping(int n, double g);
/// Conjugation by exp(-i eps P) for a Pauli string P over {I,X,Y,Z}. A single
/// letter on n > 1 qubits rotates every qubit about that axis.
Channel coherent(int n, const std::string& axis, double eps);
/// Applies `parts` in order (first element acts first).
Channel composite(const std::vector<Channel>& parts);

/// Hermitian Pauli from a string like "XIY".
ComplexMatrix pauli_string_matrix(const std::string& paulis);

/// Random CPTP map with `rank` Kraus operators (Gaussian isometry).
Channel random_cptp(Eigen::Index d, int rank, Rng& rng);

/// Average fidelity from (b, c): (b(d^2+d-2) + c d(d-1) + 2(d+1)) / (2d(d+1)).
double avg_fidelity_from_bc(double b, double c, Eigen::Index d);
/// Average rebit fidelity from b: (b(d-1) + 1) / d.
double rebit_fidelity_from_b(double b, Eigen::Index d);

/// Haar-random unitary / orthogonal via QR of a Gaussian matrix with the
/// diagonal-phase correction.
ComplexMatrix haar_unitary(Eigen::Index d, Rng& rng);
RealMatrix haar_orthogonal(Eigen::Index d, Rng& rng);

enum class HaarEnsemble { kUnitary, kOrthogonal };

struct MonteCarloEstimate {
  double mean = 0;
  double std_error = 0;
  size_t samples = 0;
};

/// Monte Carlo estimate of the mean of <0|W^dag T(W|0><0|W^dag) W|0> over Haar W.
MonteCarloEstimate haar_fidelity_oracle(const Channel& t, HaarEnsemble ensemble, size_t samples, Rng& rng);

}  // namespace realrb

#endif  // REALRB_CHANNELS_H_
