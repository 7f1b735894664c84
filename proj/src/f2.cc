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

#include "realrb/f2.h"

#include <utility>

namespace realrb {

namespace {

void check_n(int n) {
  if (n < 1 || n > kMaxQubits) {
    throw std::invalid_argument("qubit count must be in [1, " + std::to_string(kMaxQubits) +
                                "], got " + std::to_string(n));
  }
}

/// Uniformly random element of span(basis).
PhaseVector random_combination(const std::vector<PhaseVector>& basis, int n, Rng& rng) {
  PhaseVector x = PhaseVector::zero(n);
  uint64_t coeffs = rng();
  for (size_t k = 0; k < basis.size(); k++) {
    if ((coeffs >> k) & 1) {
      x ^= basis[k];
    }
  }
  return x;
}

}  // namespace

PhaseVector PhaseVector::from_flat(int n, uint64_t mask) {
  uint64_t low = n == 64 ? ~uint64_t{0} : (uint64_t{1} << n) - 1;
  return {n, mask & low, (mask >> n) & low};
}

std::string PhaseVector::str() const {
  std::string s;
  for (int i = 0; i < n; i++) s += ((p >> i) & 1) ? '1' : '0';
  s += '|';
  for (int i = 0; i < n; i++) s += ((q >> i) & 1) ? '1' : '0';
  return s;
}

bool symplectic_form(const PhaseVector& x, const PhaseVector& y) {
  if (x.n != y.n) {
    throw std::invalid_argument("symplectic_form: dimension mismatch (" + std::to_string(x.n) +
                                " vs " + std::to_string(y.n) + ")");
  }
  return std::popcount((x.p & y.q) ^ (y.p & x.q)) & 1;
}

BinaryMatrix2n::BinaryMatrix2n(int n) : n_(n), cols_(2 * n, PhaseVector::zero(n)) {}

BinaryMatrix2n::BinaryMatrix2n(int n, std::vector<PhaseVector> columns)
    : n_(n), cols_(std::move(columns)) {
  if (static_cast<int>(cols_.size()) != 2 * n) {
    throw std::invalid_argument("BinaryMatrix2n: expected 2n columns");
  }
  for (const auto& c : cols_) {
    if (c.n != n) throw std::invalid_argument("BinaryMatrix2n: column of wrong dimension");
  }
}

BinaryMatrix2n BinaryMatrix2n::identity(int n) {
  BinaryMatrix2n m(n);
  for (int k = 0; k < 2 * n; k++) m.cols_[k] = PhaseVector::unit(n, k);
  return m;
}

BinaryMatrix2n BinaryMatrix2n::from_rows(const std::vector<std::vector<int>>& rows) {
  size_t dim = rows.size();
  if (dim == 0 || dim % 2 != 0) {
    throw std::invalid_argument("BinaryMatrix2n::from_rows: dimension must be even and positive");
  }
  BinaryMatrix2n m(static_cast<int>(dim / 2));
  for (size_t r = 0; r < dim; r++) {
    if (rows[r].size() != dim) throw std::invalid_argument("BinaryMatrix2n::from_rows: not square");
    for (size_t c = 0; c < dim; c++) {
      if (rows[r][c] != 0 && rows[r][c] != 1) {
        throw std::invalid_argument("BinaryMatrix2n::from_rows: entries must be 0 or 1");
      }
      m.set(static_cast<int>(r), static_cast<int>(c), rows[r][c] == 1);
    }
  }
  return m;
}

void BinaryMatrix2n::set(int row, int col, bool v) {
  if (cols_[col].bit(row) != v) cols_[col].flip(row);
}

std::vector<PhaseVector> BinaryMatrix2n::hyperbolic_pairs() const {
  std::vector<PhaseVector> out;
  out.reserve(cols_.size());
  for (int i = 0; i < n_; i++) {
    out.push_back(cols_[i]);
    out.push_back(cols_[n_ + i]);
  }
  return out;
}

PhaseVector BinaryMatrix2n::apply(const PhaseVector& x) const {
  PhaseVector out = PhaseVector::zero(n_);
  for (int k = 0; k < 2 * n_; k++) {
    if (x.bit(k)) out ^= cols_[k];
  }
  return out;
}

BinaryMatrix2n BinaryMatrix2n::transpose() const {
  BinaryMatrix2n t(n_);
  for (int r = 0; r < 2 * n_; r++) {
    for (int c = 0; c < 2 * n_; c++) {
      if (at(r, c)) t.set(c, r, true);
    }
  }
  return t;
}

void BinaryMatrix2n::row_xor(int target, int source) {
  for (auto& c : cols_) {
    if (c.bit(source)) c.flip(target);
  }
}

void BinaryMatrix2n::row_swap(int a, int b) {
  for (auto& c : cols_) {
    if (c.bit(a) != c.bit(b)) {
      c.flip(a);
      c.flip(b);
    }
  }
}

BinaryMatrix2n operator*(const BinaryMatrix2n& a, const BinaryMatrix2n& b) {
  if (a.n_ != b.n_) throw std::invalid_argument("BinaryMatrix2n product: dimension mismatch");
  BinaryMatrix2n out(a.n_);
  for (int k = 0; k < 2 * a.n_; k++) out.cols_[k] = a.apply(b.cols_[k]);
  return out;
}

std::vector<std::string> BinaryMatrix2n::row_strings() const {
  std::vector<std::string> rows;
  for (int r = 0; r < 2 * n_; r++) {
    std::string s;
    for (int c = 0; c < 2 * n_; c++) s += at(r, c) ? '1' : '0';
    rows.push_back(std::move(s));
  }
  return rows;
}

BinaryMatrix2n symplectic_j(int n) {
  BinaryMatrix2n j(n);
  for (int i = 0; i < n; i++) {
    j.column(i) = PhaseVector::unit_q(n, i);
    j.column(n + i) = PhaseVector::unit_p(n, i);
  }
  return j;
}

bool is_in_oplus(const BinaryMatrix2n& s) {
  int n = s.n();
  if (n < 1) return false;
  for (int a = 0; a < 2 * n; a++) {
    if (quadratic_form(s.column(a))) return false;
    for (int b = a + 1; b < 2 * n; b++) {
      // The standard basis pairs only (p_i, q_i).
      bool expected = (b == a + n);
      if (symplectic_form(s.column(a), s.column(b)) != expected) return false;
    }
  }
  return true;
}

std::vector<PhaseVector> orthogonal_complement(const std::vector<PhaseVector>& basis,
                                               const std::vector<PhaseVector>& ambient) {
  const int k = static_cast<int>(ambient.size());
  if (k == 0) return {};
  if (k > 64) throw std::invalid_argument("orthogonal_complement: ambient basis too large");
  const int n = ambient.front().n;

  // Constraint rows over the ambient coefficients c: sum_k c_k [a_k, b_j] = 0.
  std::vector<uint64_t> rows;
  rows.reserve(basis.size());
  for (const auto& b : basis) {
    uint64_t row = 0;
    for (int c = 0; c < k; c++) {
      if (symplectic_form(ambient[c], b)) row |= uint64_t{1} << c;
    }
    rows.push_back(row);
  }

  // Reduced row echelon form.
  std::vector<int> pivot_of_row;
  std::vector<bool> is_pivot(k, false);
  size_t rank = 0;
  for (int c = 0; c < k && rank < rows.size(); c++) {
    size_t sel = rank;
    while (sel < rows.size() && !((rows[sel] >> c) & 1)) sel++;
    if (sel == rows.size()) continue;
    std::swap(rows[rank], rows[sel]);
    for (size_t r = 0; r < rows.size(); r++) {
      if (r != rank && ((rows[r] >> c) & 1)) rows[r] ^= rows[rank];
    }
    pivot_of_row.push_back(c);
    is_pivot[c] = true;
    rank++;
  }

  std::vector<PhaseVector> out;
  for (int free = 0; free < k; free++) {
    if (is_pivot[free]) continue;
    uint64_t coeffs = uint64_t{1} << free;
    for (size_t r = 0; r < rank; r++) {
      if ((rows[r] >> free) & 1) coeffs |= uint64_t{1} << pivot_of_row[r];
    }
    PhaseVector v = PhaseVector::zero(n);
    for (int c = 0; c < k; c++) {
      if ((coeffs >> c) & 1) v ^= ambient[c];
    }
    out.push_back(v);
  }
  return out;
}

BinaryMatrix2n sample_oplus(int n, Rng& rng) {
  check_n(n);
  std::vector<PhaseVector> current;
  for (int k = 0; k < 2 * n; k++) current.push_back(PhaseVector::unit(n, k));

  BinaryMatrix2n s(n);
  for (int i = 0; i < n; i++) {
    PhaseVector e;
    int draws = 0;
    do {
      if (++draws > kRejectionCap) throw std::runtime_error("sample_oplus: singular draw cap hit");
      e = random_combination(current, n, rng);
    } while (e.is_zero() || quadratic_form(e));

    PhaseVector y;
    draws = 0;
    do {
      if (++draws > kRejectionCap) throw std::runtime_error("sample_oplus: pairing draw cap hit");
      y = random_combination(current, n, rng);
    } while (!symplectic_form(e, y));
    PhaseVector f = quadratic_form(y) ? e + y : y;

    s.column(i) = e;
    s.column(n + i) = f;
    current = orthogonal_complement({e, f}, current);
  }
  return s;
}

BinaryMatrix2n invert_symplectic(const BinaryMatrix2n& s) {
  const int n = s.n();
  const int dim = 2 * n;
  // Augmented rows [S | I] packed as (left, right) words in the flattened layout.
  std::vector<std::pair<uint64_t, uint64_t>> rows(dim);
  for (int r = 0; r < dim; r++) {
    uint64_t left = 0;
    for (int c = 0; c < dim; c++) {
      if (s.at(r, c)) left |= uint64_t{1} << c;
    }
    rows[r] = {left, uint64_t{1} << r};
  }
  for (int c = 0; c < dim; c++) {
    int sel = c;
    while (sel < dim && !((rows[sel].first >> c) & 1)) sel++;
    if (sel == dim) throw std::domain_error("invert_symplectic: matrix is singular over F_2");
    std::swap(rows[c], rows[sel]);
    for (int r = 0; r < dim; r++) {
      if (r != c && ((rows[r].first >> c) & 1)) {
        rows[r].first ^= rows[c].first;
        rows[r].second ^= rows[c].second;
      }
    }
  }
  BinaryMatrix2n inv(n);
  for (int r = 0; r < dim; r++) {
    for (int c = 0; c < dim; c++) {
      if ((rows[r].second >> c) & 1) inv.set(r, c, true);
    }
  }
  return inv;
}

std::vector<BinaryMatrix2n> enumerate_oplus(int n) {
  if (n < 1 || n > 2) {
    throw std::invalid_argument("enumerate_oplus: brute force only supported for n <= 2");
  }
  const int dim = 2 * n;
  const uint64_t count = uint64_t{1} << (dim * dim);
  std::vector<BinaryMatrix2n> out;
  for (uint64_t bits = 0; bits < count; bits++) {
    BinaryMatrix2n m(n);
    for (int c = 0; c < dim; c++) {
      m.column(c) = PhaseVector::from_flat(n, (bits >> (c * dim)) & ((uint64_t{1} << dim) - 1));
    }
    if (is_in_oplus(m)) out.push_back(std::move(m));
  }
  return out;
}

}  // namespace realrb
