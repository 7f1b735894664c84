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

#include <cmath>
#include <complex>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

namespace realrb {

namespace {

using cd = std::complex<double>;

ComplexMatrix kraus_superop(const std::vector<ComplexMatrix>& kraus) {
  const auto d = kraus.front().rows();
  ComplexMatrix s = ComplexMatrix::Zero(d * d, d * d);
  for (const auto& k : kraus) s += Eigen::kroneckerProduct(k.conjugate(), k).eval();
  return s;
}

ComplexMatrix transposition_superop(Eigen::Index d) {
  ComplexMatrix t = ComplexMatrix::Zero(d * d, d * d);
  for (Eigen::Index i = 0; i < d; i++) {
    for (Eigen::Index j = 0; j < d; j++) t(j + d * i, i + d * j) = 1;
  }
  return t;
}

ComplexMatrix trace_to_identity_superop(Eigen::Index d) {
  Eigen::VectorXcd vi = vec(ComplexMatrix::Identity(d, d));
  return vi * vi.adjoint();
}

std::vector<ComplexMatrix> tensor_kraus(const std::vector<ComplexMatrix>& single, int n) {
  std::vector<ComplexMatrix> out{ComplexMatrix::Identity(1, 1)};
  for (int q = 0; q < n; q++) {
    std::vector<ComplexMatrix> next;
    for (const auto& a : out) {
      for (const auto& k : single) next.push_back(Eigen::kroneckerProduct(a, k).eval());
    }
    out = std::move(next);
  }
  return out;
}

ComplexMatrix single_pauli(char c) {
  ComplexMatrix m(2, 2);
  switch (c) {
    case 'I':
      m << 1, 0, 0, 1;
      break;
    case 'X':
      m << 0, 1, 1, 0;
      break;
    case 'Y':
      m << 0, cd(0, -1), cd(0, 1), 0;
      break;
    case 'Z':
      m << 1, 0, 0, -1;
      break;
    default:
      throw std::invalid_argument(std::string("unknown Pauli letter '") + c + "'");
  }
  return m;
}

void check_qubits(int n) {
  if (n < 1 || n > 6) throw std::invalid_argument("noise models support 1 <= n <= 6 qubits");
}

void check_unit_interval(double g, const char* what) {
  if (!(g >= 0.0 && g <= 1.0)) {
    throw std::invalid_argument(std::string(what) + ": parameter must lie in [0, 1], got " + std::to_string(g));
  }
}

}  // namespace

Eigen::VectorXcd vec(const ComplexMatrix& x) {
  return Eigen::Map<const Eigen::VectorXcd>(x.data(), x.size());
}

ComplexMatrix unvec(const Eigen::VectorXcd& v, Eigen::Index d) {
  return Eigen::Map<const ComplexMatrix>(v.data(), d, d);
}

DensityMatrix DensityMatrix::from_matrix(ComplexMatrix m, double tol) {
  if (m.rows() != m.cols() || m.rows() == 0) throw std::invalid_argument("density matrix must be square");
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tol) throw std::invalid_argument("density matrix is not Hermitian");
  if (std::abs(m.trace() - cd(1.0)) > tol) throw std::invalid_argument("density matrix trace is not 1");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol) throw std::invalid_argument("density matrix has a negative eigenvalue");
  return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::pure(const Eigen::VectorXcd& psi) {
  return from_matrix(psi * psi.adjoint());
}

DensityMatrix DensityMatrix::basis_state(Eigen::Index d, Eigen::Index k) {
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  m(k, k) = 1;
  return DensityMatrix(std::move(m));
}

Channel Channel::identity(Eigen::Index d) {
  return from_kraus({ComplexMatrix::Identity(d, d)}, "identity");
}

Channel Channel::from_kraus(std::vector<ComplexMatrix> kraus, std::string label) {
  if (kraus.empty()) throw std::invalid_argument("Channel::from_kraus: empty Kraus list");
  Channel ch;
  ch.d = kraus.front().rows();
  ch.superop = kraus_superop(kraus);
  ComplexMatrix completeness = ComplexMatrix::Zero(ch.d, ch.d);
  for (const auto& k : kraus) completeness += k.adjoint() * k;
  if ((completeness - ComplexMatrix::Identity(ch.d, ch.d)).cwiseAbs().maxCoeff() > 1e-9) {
    throw std::invalid_argument("Channel::from_kraus: Kraus operators are not trace preserving");
  }
  ch.kraus = std::move(kraus);
  ch.cptp = true;
  ch.label = std::move(label);
  return ch;
}

Channel Channel::from_superop(ComplexMatrix superop, std::string label) {
  const auto dd = superop.rows();
  const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(dd))));
  if (d * d != dd || superop.cols() != dd) throw std::invalid_argument("superoperator must be d^2 x d^2");
  Channel ch;
  ch.d = d;
  ch.superop = std::move(superop);
  ch.label = std::move(label);
  return ch;
}

Channel Channel::unitary(const ComplexMatrix& u, std::string label) {
  return from_kraus({u}, std::move(label));
}

Channel Channel::transposition(Eigen::Index d) { return from_superop(transposition_superop(d), "transposition"); }

Channel Channel::completely_depolarizing(Eigen::Index d) {
  std::vector<ComplexMatrix> kraus;
  const double w = 1.0 / std::sqrt(static_cast<double>(d));
  for (Eigen::Index i = 0; i < d; i++) {
    for (Eigen::Index j = 0; j < d; j++) {
      ComplexMatrix k = ComplexMatrix::Zero(d, d);
      k(i, j) = w;
      kraus.push_back(std::move(k));
    }
  }
  return from_kraus(std::move(kraus), "completely_depolarizing");
}

ComplexMatrix Channel::apply(const ComplexMatrix& x) const { return unvec(superop * vec(x), d); }

ComplexMatrix Channel::apply_adjoint(const ComplexMatrix& e) const { return unvec(superop.adjoint() * vec(e), d); }

bool Channel::is_cptp(double tol) const {
  ComplexMatrix tau = choi(*this);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(tau, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol) return false;
  for (Eigen::Index i = 0; i < d; i++) {
    for (Eigen::Index j = 0; j < d; j++) {
      cd partial = 0;
      for (Eigen::Index a = 0; a < d; a++) partial += tau(i * d + a, j * d + a);
      cd expected = i == j ? cd(1.0 / static_cast<double>(d)) : cd(0);
      if (std::abs(partial - expected) > tol) return false;
    }
  }
  return true;
}

Channel then(const Channel& first, const Channel& second) {
  if (first.d != second.d) throw std::invalid_argument("channel composition: dimension mismatch");
  if (first.cptp && second.cptp && !first.kraus.empty() && !second.kraus.empty()) {
    std::vector<ComplexMatrix> kraus;
    for (const auto& b : second.kraus) {
      for (const auto& a : first.kraus) kraus.push_back(b * a);
    }
    return Channel::from_kraus(std::move(kraus), second.label + " . " + first.label);
  }
  return Channel::from_superop(second.superop * first.superop, second.label + " . " + first.label);
}

ComplexMatrix choi(const Channel& t) {
  const auto d = t.d;
  ComplexMatrix tau(d * d, d * d);
  const double scale = 1.0 / static_cast<double>(d);
  for (Eigen::Index i = 0; i < d; i++) {
    for (Eigen::Index j = 0; j < d; j++) {
      // T(|i><j|) is column i + d j of the superoperator.
      for (Eigen::Index a = 0; a < d; a++) {
        for (Eigen::Index b = 0; b < d; b++) tau(i * d + a, j * d + b) = scale * t.superop(a + d * b, i + d * j);
      }
    }
  }
  return tau;
}

ComplexMatrix flip_operator(Eigen::Index d) {
  ComplexMatrix f = ComplexMatrix::Zero(d * d, d * d);
  for (Eigen::Index i = 0; i < d; i++) {
    for (Eigen::Index j = 0; j < d; j++) f(i * d + j, j * d + i) = 1;
  }
  return f;
}

ComplexMatrix max_entangled_projector(Eigen::Index d) {
  ComplexMatrix p = ComplexMatrix::Zero(d * d, d * d);
  for (Eigen::Index i = 0; i < d; i++) {
    for (Eigen::Index j = 0; j < d; j++) p(i * d + i, j * d + j) = 1.0 / static_cast<double>(d);
  }
  return p;
}

TwirlProjectors projectors(Eigen::Index d) {
  if (d < 2) throw std::invalid_argument("projectors: d must be at least 2");
  ComplexMatrix id = ComplexMatrix::Identity(d * d, d * d);
  ComplexMatrix f = flip_operator(d);
  ComplexMatrix omega = max_entangled_projector(d);
  return {omega, 0.5 * (id - f), 0.5 * (id + f) - omega};
}

TwirlCoefficients TwirlCoefficients::from_abc(double a, double b, double c, Eigen::Index d) {
  const double dd = static_cast<double>(d);
  TwirlCoefficients t;
  t.a = a;
  t.b = b;
  t.c = c;
  t.d = d;
  t.alpha = 0.5 * (b + c);
  t.beta = a - b + 0.5 * (b - c) * dd;
  t.gamma = 0.5 * (c - b) * (dd - 1);
  return t;
}

TwirlCoefficients TwirlCoefficients::from_alpha_beta_gamma(double alpha, double beta, double gamma, Eigen::Index d) {
  const double dd = static_cast<double>(d);
  TwirlCoefficients t;
  t.alpha = alpha;
  t.beta = beta;
  t.gamma = gamma;
  t.d = d;
  t.a = alpha + beta + gamma;
  t.b = alpha - gamma / (dd - 1);
  t.c = alpha + gamma / (dd - 1);
  return t;
}

TwirlCoefficients twirl_analytic(const Channel& t) {
  const auto d = t.d;
  const double dd = static_cast<double>(d);
  const double dim1 = dd * (dd - 1) / 2;
  const double dim2 = dd * (dd + 1) / 2 - 1;
  ComplexMatrix tau = choi(t);
  TwirlProjectors p = projectors(d);
  const double t0 = (tau * p.p0).trace().real();
  const double t1 = (tau * p.p1).trace().real();
  const double t2 = (tau * p.p2).trace().real();
  // Twirled Choi = sum_k t_k P_k / dim_k. Choi states of the three basis maps:
  // id -> P0, tr[.]I/d -> I/d^2, (tr[.]I - theta)/(d-1) -> P1/dim1.
  const double beta = dd * dd * t2 / dim2;
  const double gamma = t1 - beta * dim1 / (dd * dd);
  const double alpha = t0 - beta / (dd * dd);
  return TwirlCoefficients::from_alpha_beta_gamma(alpha, beta, gamma, d);
}

Channel twirled_channel(const TwirlCoefficients& coeffs) {
  const auto d = coeffs.d;
  const double dd = static_cast<double>(d);
  ComplexMatrix id = ComplexMatrix::Identity(d * d, d * d);
  ComplexMatrix trace_part = trace_to_identity_superop(d);
  ComplexMatrix s = coeffs.alpha * id + (coeffs.beta / dd) * trace_part +
                    (coeffs.gamma / (dd - 1)) * (trace_part - transposition_superop(d));
  return Channel::from_superop(std::move(s), "twirled");
}

Channel twirl_average(const Channel& t, const std::vector<RealMatrix>& elements) {
  if (elements.empty()) throw std::invalid_argument("twirl_average: empty ensemble");
  const auto d = t.d;
  ComplexMatrix acc = ComplexMatrix::Zero(d * d, d * d);
  for (const auto& o : elements) {
    if (o.rows() != d) throw std::invalid_argument("twirl_average: element dimension mismatch");
    // vec(O X O^T) = (O (x) O) vec(X) for real O.
    ComplexMatrix fwd = Eigen::kroneckerProduct(o, o).eval().cast<cd>();
    acc += fwd.transpose() * t.superop * fwd;
  }
  acc /= static_cast<double>(elements.size());
  return Channel::from_superop(std::move(acc), "twirl(" + t.label + ")");
}

Channel twirl_average(const Channel& t, const std::vector<RealCliffordElement>& elements) {
  std::vector<RealMatrix> dense;
  dense.reserve(elements.size());
  for (const auto& e : elements) dense.push_back(e.dense);
  return twirl_average(t, dense);
}

ComplexMatrix twirled_power_apply(const TwirlCoefficients& coeffs, int m, const ComplexMatrix& rho) {
  const auto d = rho.rows();
  const cd tr = rho.trace();
  ComplexMatrix mixed = tr * ComplexMatrix::Identity(d, d) / static_cast<double>(d);
  ComplexMatrix sym = 0.5 * (rho + rho.transpose());
  ComplexMatrix antisym = 0.5 * (rho - rho.transpose());
  return std::pow(coeffs.a, m) * mixed + std::pow(coeffs.b, m) * (sym - mixed) + std::pow(coeffs.c, m) * antisym;
}

ComplexMatrix pauli_string_matrix(const std::string& paulis) {
  ComplexMatrix m = ComplexMatrix::Identity(1, 1);
  for (char c : paulis) m = Eigen::kroneckerProduct(m, single_pauli(c)).eval();
  return m;
}

Channel depolarizing(int n, double p) {
  check_qubits(n);
  const double d = std::ldexp(1.0, n);
  const double d2 = d * d;
  if (!(p >= -1.0 / (d2 - 1) - 1e-15 && p <= 1.0)) {
    throw std::invalid_argument("depolarizing: p must lie in [-1/(d^2-1), 1], got " + std::to_string(p));
  }
  const double w_identity = p + (1 - p) / d2;
  const double w_other = (1 - p) / d2;
  std::vector<ComplexMatrix> kraus;
  const std::string letters = "IXYZ";
  const size_t count = size_t{1} << (2 * n);
  for (size_t code = 0; code < count; code++) {
    std::string s;
    for (int q = 0; q < n; q++) s += letters[(code >> (2 * q)) & 3];
    double w = code == 0 ? w_identity : w_other;
    if (w <= 0) continue;
    kraus.push_back(std::sqrt(w) * pauli_string_matrix(s));
  }
  return Channel::from_kraus(std::move(kraus), "depolarizing(" + std::to_string(p) + ")");
}

Channel dephasing(int n, double g) {
  check_qubits(n);
  check_unit_interval(g, "dephasing");
  auto kraus = tensor_kraus({std::sqrt(1 - g) * single_pauli('I'), std::sqrt(g) * single_pauli('Z')}, n);
  return Channel::from_kraus(std::move(kraus), "dephasing(" + std::to_string(g) + ")");
}

Channel amplitude_damping(int n, double g) {
  check_qubits(n);
  check_unit_interval(g, "amplitude_damping");
  ComplexMatrix k0(2, 2), k1(2, 2);
  k0 << 1, 0, 0, std::sqrt(1 - g);
  k1 << 0, std::sqrt(g), 0, 0;
  return Channel::from_kraus(tensor_kraus({k0, k1}, n), "amplitude_damping(" + std::to_string(g) + ")");
}

Channel coherent(int n, const std::string& axis, double eps) {
  check_qubits(n);
  if (!std::isfinite(eps)) throw std::invalid_argument("coherent: angle must be finite");
  auto rotation = [eps](const ComplexMatrix& p) {
    const auto d = p.rows();
    return (std::cos(eps) * ComplexMatrix::Identity(d, d) - cd(0, std::sin(eps)) * p).eval();
  };
  ComplexMatrix u;
  if (axis.size() == 1 && n > 1) {
    ComplexMatrix single = rotation(single_pauli(axis[0]));
    u = ComplexMatrix::Identity(1, 1);
    for (int q = 0; q < n; q++) u = Eigen::kroneckerProduct(u, single).eval();
  } else if (static_cast<int>(axis.size()) == n) {
    u = rotation(pauli_string_matrix(axis));
  } else {
    throw std::invalid_argument("coherent: axis '" + axis + "' must be one letter or n letters");
  }
  return Channel::unitary(u, "coherent(" + axis + "," + std::to_string(eps) + ")");
}

Channel composite(const std::vector<Channel>& parts) {
  if (parts.empty()) throw std::invalid_argument("composite: empty channel list");
  Channel acc = parts.front();
  for (size_t k = 1; k < parts.size(); k++) acc = then(acc, parts[k]);
  return acc;
}

Channel random_cptp(Eigen::Index d, int rank, Rng& rng) {
  std::normal_distribution<double> gauss;
  ComplexMatrix g(rank * d, d);
  for (Eigen::Index r = 0; r < g.rows(); r++) {
    for (Eigen::Index c = 0; c < d; c++) g(r, c) = cd(gauss(rng), gauss(rng));
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(g.adjoint() * g);
  ComplexMatrix inv_sqrt = es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                           es.eigenvectors().adjoint();
  ComplexMatrix v = g * inv_sqrt;
  std::vector<ComplexMatrix> kraus;
  for (int r = 0; r < rank; r++) kraus.push_back(v.middleRows(r * d, d));
  return Channel::from_kraus(std::move(kraus), "random");
}

double avg_fidelity_from_bc(double b, double c, Eigen::Index d) {
  const double dd = static_cast<double>(d);
  return (b * (dd * dd + dd - 2) + c * dd * (dd - 1) + 2 * (dd + 1)) / (2 * dd * (dd + 1));
}

double rebit_fidelity_from_b(double b, Eigen::Index d) {
  const double dd = static_cast<double>(d);
  return (b * (dd - 1) + 1) / dd;
}

ComplexMatrix haar_unitary(Eigen::Index d, Rng& rng) {
  std::normal_distribution<double> gauss;
  ComplexMatrix z(d, d);
  for (Eigen::Index i = 0; i < d; i++) {
    for (Eigen::Index j = 0; j < d; j++) z(i, j) = cd(gauss(rng), gauss(rng));
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < d; j++) {
    cd diag = r(j, j);
    q.col(j) *= diag / std::abs(diag);
  }
  return q;
}

RealMatrix haar_orthogonal(Eigen::Index d, Rng& rng) {
  std::normal_distribution<double> gauss;
  RealMatrix z(d, d);
  for (Eigen::Index i = 0; i < d; i++) {
    for (Eigen::Index j = 0; j < d; j++) z(i, j) = gauss(rng);
  }
  Eigen::HouseholderQR<RealMatrix> qr(z);
  RealMatrix q = qr.householderQ();
  const RealMatrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < d; j++) {
    if (r(j, j) < 0) q.col(j) *= -1.0;
  }
  return q;
}

MonteCarloEstimate haar_fidelity_oracle(const Channel& t, HaarEnsemble ensemble, size_t samples, Rng& rng) {
  if (samples < 2) throw std::invalid_argument("haar_fidelity_oracle: need at least 2 samples");
  double sum = 0, sum_sq = 0;
  for (size_t k = 0; k < samples; k++) {
    Eigen::VectorXcd psi = ensemble == HaarEnsemble::kUnitary
                               ? Eigen::VectorXcd(haar_unitary(t.d, rng).col(0))
                               : Eigen::VectorXcd(haar_orthogonal(t.d, rng).col(0).cast<cd>());
    ComplexMatrix out = t.apply(psi * psi.adjoint());
    double f = (psi.adjoint() * out * psi)(0, 0).real();
    sum += f;
    sum_sq += f * f;
  }
  const double n = static_cast<double>(samples);
  const double mean = sum / n;
  const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1));
  return {mean, std::sqrt(var / n), samples};
}

}  // namespace realrb
