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

#include <algorithm>
#include <cmath>
#include <complex>
#include <deque>
#include <stdexcept>

namespace realrb {

namespace {

constexpr double kPauliTol = 1e-9;

size_t index_mask(int n, uint64_t qubit_bits) {
  size_t mask = 0;
  for (int i = 0; i < n; i++) {
    if ((qubit_bits >> i) & 1) mask |= qubit_bit(n, i);
  }
  return mask;
}

/// Records H/CZ/CNOT row operations applied to a working copy of S.
class Reducer {
 public:
  explicit Reducer(const BinaryMatrix2n& s) : m_(s), n_(s.n()) {}

  const BinaryMatrix2n& matrix() const { return m_; }
  const std::vector<Gate>& gates() const { return gates_; }

  void h(int j) {
    m_.row_swap(j, n_ + j);
    gates_.push_back({GateKind::kH, j});
  }
  // p_k ^= q_j, p_j ^= q_k.
  void cz(int j, int k) {
    m_.row_xor(k, n_ + j);
    m_.row_xor(j, n_ + k);
    gates_.push_back({GateKind::kCZ, std::min(j, k), std::max(j, k)});
  }
  // q_t ^= q_c, p_c ^= p_t.
  void cnot(int c, int t) {
    m_.row_xor(n_ + t, n_ + c);
    m_.row_xor(c, t);
    gates_.push_back({GateKind::kCNOT, c, t});
  }

 private:
  BinaryMatrix2n m_;
  int n_;
  std::vector<Gate> gates_;
};

bool pbit(const PhaseVector& v, int j) { return (v.p >> j) & 1; }
bool qbit(const PhaseVector& v, int j) { return (v.q >> j) & 1; }

}  // namespace

ComplexMatrix hermitian_pauli(const PhaseVector& x) {
  const int n = x.n;
  const size_t d = size_t{1} << n;
  const size_t xmask = index_mask(n, x.q);
  const size_t zmask = index_mask(n, x.p);
  const std::complex<double> phase = quadratic_form(x) ? std::complex<double>(0, 1) : 1.0;
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  for (size_t c = 0; c < d; c++) {
    double s = (std::popcount(c & zmask) & 1) ? -1.0 : 1.0;
    m(c ^ xmask, c) = phase * s;
  }
  return m;
}

RealMatrix PauliLabel::real_matrix() const {
  const int n = x.n;
  const size_t d = size_t{1} << n;
  const size_t xmask = index_mask(n, x.q);
  const size_t zmask = index_mask(n, x.p);
  RealMatrix m = RealMatrix::Zero(d, d);
  for (size_t c = 0; c < d; c++) {
    double s = (std::popcount(c & zmask) & 1) ? -1.0 : 1.0;
    m(c ^ xmask, c) = sign * s;
  }
  return m;
}

std::string PauliLabel::str() const { return (sign < 0 ? "-" : "+") + x.str(); }

std::optional<PauliLabel> extract_real_pauli(const RealMatrix& m) {
  const size_t d = m.rows();
  if (d == 0 || m.cols() != static_cast<Eigen::Index>(d) || (d & (d - 1)) != 0) return std::nullopt;
  const int n = std::countr_zero(d);
  size_t row = 0;
  while (row < d && std::abs(m(row, 0)) < 0.5) row++;
  if (row == d) return std::nullopt;
  const double lead = m(row, 0);
  PauliLabel label{PhaseVector::zero(n), lead < 0 ? -1 : 1};
  for (int i = 0; i < n; i++) {
    if ((row & qubit_bit(n, i)) != 0) label.x.q |= uint64_t{1} << i;
    size_t c = qubit_bit(n, i);
    if (m(c ^ row, c) * lead < 0) label.x.p |= uint64_t{1} << i;
  }
  if ((label.real_matrix() - m).cwiseAbs().maxCoeff() > kPauliTol) return std::nullopt;
  return label;
}

std::string Gate::str() const {
  switch (kind) {
    case GateKind::kZ:
      return "Z " + std::to_string(a);
    case GateKind::kX:
      return "X " + std::to_string(a);
    case GateKind::kH:
      return "H " + std::to_string(a);
    case GateKind::kCZ:
      return "CZ " + std::to_string(a) + " " + std::to_string(b);
    case GateKind::kCNOT:
      return "CNOT " + std::to_string(a) + " " + std::to_string(b);
  }
  return "?";
}

void apply_gate_left(RealMatrix& u, const Gate& g, int n) {
  const size_t d = u.rows();
  const size_t ba = qubit_bit(n, g.a);
  switch (g.kind) {
    case GateKind::kZ:
      for (size_t r = 0; r < d; r++) {
        if (r & ba) u.row(r) *= -1.0;
      }
      break;
    case GateKind::kX:
      for (size_t r = 0; r < d; r++) {
        if (!(r & ba)) u.row(r).swap(u.row(r | ba));
      }
      break;
    case GateKind::kH: {
      const double s = 1.0 / std::sqrt(2.0);
      for (size_t r = 0; r < d; r++) {
        if (r & ba) continue;
        Eigen::RowVectorXd top = u.row(r);
        Eigen::RowVectorXd bottom = u.row(r | ba);
        u.row(r) = s * (top + bottom);
        u.row(r | ba) = s * (top - bottom);
      }
      break;
    }
    case GateKind::kCZ: {
      const size_t bb = qubit_bit(n, g.b);
      for (size_t r = 0; r < d; r++) {
        if ((r & ba) && (r & bb)) u.row(r) *= -1.0;
      }
      break;
    }
    case GateKind::kCNOT: {
      const size_t bt = qubit_bit(n, g.b);
      for (size_t r = 0; r < d; r++) {
        if ((r & ba) && !(r & bt)) u.row(r).swap(u.row(r | bt));
      }
      break;
    }
  }
}

RealMatrix GateSequence::dense() const {
  const size_t d = size_t{1} << n;
  RealMatrix u = RealMatrix::Identity(d, d);
  for (const auto& g : gates) apply_gate_left(u, g, n);
  return u;
}

std::string GateSequence::str() const {
  std::string s;
  for (size_t k = 0; k < gates.size(); k++) {
    if (k) s += "; ";
    s += gates[k].str();
  }
  return s;
}

GateSequence synthesize_clifford(const BinaryMatrix2n& s) {
  if (!is_in_oplus(s)) {
    throw std::invalid_argument("synthesize_clifford: matrix is not in O+(2n,2)");
  }
  const int n = s.n();
  Reducer red(s);

  for (int i = 0; i < n; i++) {
    // Column e_i -> p_i. It is singular, so its Y-type components come in pairs.
    PhaseVector e = red.matrix().column(i);
    int pending_y = -1;
    for (int j = i; j < n; j++) {
      if (pbit(e, j) && qbit(e, j)) {
        if (pending_y < 0) {
          pending_y = j;
        } else {
          red.cz(pending_y, j);
          pending_y = -1;
        }
      }
    }
    e = red.matrix().column(i);
    for (int j = i; j < n; j++) {
      if (qbit(e, j)) red.h(j);
    }
    e = red.matrix().column(i);
    if (!pbit(e, i)) {
      int j = i + 1;
      while (j < n && !pbit(e, j)) j++;
      red.cnot(i, j);  // p_i ^= p_j
    }
    e = red.matrix().column(i);
    for (int t = i + 1; t < n; t++) {
      if (pbit(e, t)) red.cnot(t, i);  // p_t ^= p_i
    }

    // Column f_i -> q_i using gates that fix p_i.
    for (int j = i + 1; j < n; j++) {
      const PhaseVector& f = red.matrix().column(n + i);
      if (qbit(f, j)) red.cnot(i, j);  // q_j ^= q_i
      if (pbit(red.matrix().column(n + i), j)) {
        red.h(j);
        red.cnot(i, j);
      }
    }
  }
  if (!(red.matrix() == BinaryMatrix2n::identity(n))) {
    throw std::logic_error("synthesize_clifford: reduction did not reach the identity");
  }

  GateSequence seq{n, red.gates()};
  std::reverse(seq.gates.begin(), seq.gates.end());
  return seq;
}

std::optional<PauliLabel> conjugate_pauli(const RealMatrix& u, const PhaseVector& x) {
  const int n = x.n;
  const size_t d = size_t{1} << n;
  if (u.rows() != static_cast<Eigen::Index>(d)) {
    throw std::invalid_argument("conjugate_pauli: matrix dimension does not match 2^n");
  }
  ComplexMatrix m = u.cast<std::complex<double>>() * hermitian_pauli(x) * u.transpose().cast<std::complex<double>>();

  size_t row = 0;
  while (row < d && std::abs(m(row, 0)) < 0.5) row++;
  if (row == d) return std::nullopt;
  const std::complex<double> lead = m(row, 0);
  PhaseVector y = PhaseVector::zero(n);
  for (int i = 0; i < n; i++) {
    if (row & qubit_bit(n, i)) y.q |= uint64_t{1} << i;
    size_t c = qubit_bit(n, i);
    if ((m(c ^ row, c) / lead).real() < 0) y.p |= uint64_t{1} << i;
  }
  // lead = sign * i^{Q(y)}; anything else is not a real Clifford action.
  std::complex<double> sign = lead / (quadratic_form(y) ? std::complex<double>(0, 1) : 1.0);
  if (std::abs(sign.imag()) > kPauliTol || std::abs(std::abs(sign.real()) - 1.0) > kPauliTol) {
    return std::nullopt;
  }
  PauliLabel label{y, sign.real() < 0 ? -1 : 1};
  if ((m - static_cast<double>(label.sign) * hermitian_pauli(y)).cwiseAbs().maxCoeff() > kPauliTol) {
    return std::nullopt;
  }
  return label;
}

BinaryMatrix2n symplectic_of(const RealMatrix& u, int n) {
  BinaryMatrix2n s(n);
  for (int k = 0; k < 2 * n; k++) {
    auto image = conjugate_pauli(u, PhaseVector::unit(n, k));
    if (!image) throw std::domain_error("symplectic_of: matrix does not normalize the Pauli group");
    s.column(k) = image->x;
  }
  return s;
}

RealCliffordElement RealCliffordElement::identity(int n) {
  return from_parts(BinaryMatrix2n::identity(n), PauliLabel::identity(n));
}

RealCliffordElement RealCliffordElement::from_parts(const BinaryMatrix2n& s, const PauliLabel& pauli) {
  RealCliffordElement el{s, pauli, {}, synthesize_clifford(s)};
  const int n = s.n();
  for (int i = 0; i < n; i++) {
    if (pbit(pauli.x, i)) el.circuit.gates.push_back({GateKind::kZ, i});
  }
  for (int i = 0; i < n; i++) {
    if (qbit(pauli.x, i)) el.circuit.gates.push_back({GateKind::kX, i});
  }
  el.dense = el.circuit.dense();
  if (pauli.sign < 0) el.dense *= -1.0;
  return el;
}

RealCliffordElement RealCliffordElement::from_dense(const RealMatrix& dense, const BinaryMatrix2n& s) {
  RealMatrix base = synthesize_clifford(s).dense();
  auto pauli = extract_real_pauli(dense * base.transpose());
  if (!pauli) {
    throw std::domain_error("RealCliffordElement::from_dense: matrix is inconsistent with its label");
  }
  RealCliffordElement el = from_parts(s, *pauli);
  el.dense = dense;
  return el;
}

RealCliffordElement sample_real_clifford(int n, Rng& rng, int max_qubits) {
  if (n < 1 || n > max_qubits) {
    throw std::invalid_argument("sample_real_clifford: n=" + std::to_string(n) +
                                " outside dense cap [1, " + std::to_string(max_qubits) + "]");
  }
  BinaryMatrix2n s = sample_oplus(n, rng);
  PauliLabel pauli{PhaseVector::from_flat(n, rng()), 1};
  return RealCliffordElement::from_parts(s, pauli);
}

RealCliffordElement compose(const RealCliffordElement& a, const RealCliffordElement& b) {
  if (a.n() != b.n()) throw std::invalid_argument("compose: dimension mismatch");
  return RealCliffordElement::from_dense(a.dense * b.dense, a.symplectic * b.symplectic);
}

RealCliffordElement inverse(const RealCliffordElement& a) {
  return RealCliffordElement::from_dense(a.dense.transpose(), invert_symplectic(a.symplectic));
}

RealMatrix gate_matrix(const Gate& g, int n) {
  const size_t d = size_t{1} << n;
  RealMatrix u = RealMatrix::Identity(d, d);
  apply_gate_left(u, g, n);
  return u;
}

std::vector<RealMatrix> real_clifford_generators(int n) {
  std::vector<RealMatrix> gens;
  for (int i = 0; i < n; i++) {
    gens.push_back(gate_matrix({GateKind::kZ, i}, n));
    gens.push_back(gate_matrix({GateKind::kH, i}, n));
  }
  for (int i = 0; i < n; i++) {
    for (int j = i + 1; j < n; j++) gens.push_back(gate_matrix({GateKind::kCZ, i, j}, n));
  }
  return gens;
}

std::vector<RealMatrix> real_pauli_generators(int n) {
  std::vector<RealMatrix> gens;
  for (int i = 0; i < n; i++) {
    gens.push_back(gate_matrix({GateKind::kX, i}, n));
    gens.push_back(gate_matrix({GateKind::kZ, i}, n));
  }
  return gens;
}

std::vector<RealMatrix> enumerate_closure(const std::vector<RealMatrix>& generators, size_t cap) {
  if (generators.empty()) throw std::invalid_argument("enumerate_closure: no generators");
  const auto d = generators.front().rows();
  std::vector<RealMatrix> elements{RealMatrix::Identity(d, d)};
  auto contains = [&](const RealMatrix& m) {
    return std::any_of(elements.begin(), elements.end(), [&](const RealMatrix& e) {
      return (e - m).cwiseAbs().maxCoeff() <= 1e-9;
    });
  };
  std::deque<size_t> frontier{0};
  while (!frontier.empty()) {
    size_t k = frontier.front();
    frontier.pop_front();
    for (const auto& g : generators) {
      RealMatrix next = g * elements[k];
      if (contains(next)) continue;
      if (elements.size() >= cap) throw std::length_error("enumerate_closure: cap exceeded");
      elements.push_back(std::move(next));
      frontier.push_back(elements.size() - 1);
    }
  }
  return elements;
}

}  // namespace realrb
