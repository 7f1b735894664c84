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

#ifndef REALRB_F2_H_
#define REALRB_F2_H_

#include <bit>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace realrb {

using Rng = std::mt19937_64;

/// Largest qubit count supported by the packed phase-space representation.
inline constexpr int kMaxQubits = 32;

/// Element x = (p, q) of the binary phase space F_2^{2n}.
///
/// Bit i of `p` (resp. `q`) is the p-coordinate (resp. q-coordinate) of
/// qubit i. Flattened, the layout is x = (p_1..p_n, q_1..q_n).
struct PhaseVector {
  int n = 0;
  uint64_t p = 0;
  uint64_t q = 0;

  static PhaseVector zero(int n) { return {n, 0, 0}; }
  static PhaseVector unit_p(int n, int i) { return {n, uint64_t{1} << i, 0}; }
  static PhaseVector unit_q(int n, int i) { return {n, 0, uint64_t{1} << i}; }
  /// Coordinate k of the flattened layout (k < n selects p, otherwise q).
  static PhaseVector unit(int n, int k) { return k < n ? unit_p(n, k) : unit_q(n, k - n); }
  /// Bits of `mask` interpreted in the flattened layout.
  static PhaseVector from_flat(int n, uint64_t mask);

  bool bit(int k) const { return k < n ? ((p >> k) & 1) : ((q >> (k - n)) & 1); }
  void flip(int k) {
    if (k < n) {
      p ^= uint64_t{1} << k;
    } else {
      q ^= uint64_t{1} << (k - n);
    }
  }
  bool is_zero() const { return p == 0 && q == 0; }
  uint64_t flat() const { return p | (q << n); }

  PhaseVector& operator^=(const PhaseVector& o) {
    p ^= o.p;
    q ^= o.q;
    return *this;
  }
  friend PhaseVector operator+(PhaseVector a, const PhaseVector& b) { return a ^= b; }
  friend bool operator==(const PhaseVector&, const PhaseVector&) = default;

  /// "p|q" with qubit 0 leftmost in each half, e.g. "10|01".
  std::string str() const;
};

/// Q((p,q)) = p.q mod 2.
inline bool quadratic_form(const PhaseVector& x) { return std::popcount(x.p & x.q) & 1; }

/// [x,y] = p.q' + p'.q mod 2. Throws std::invalid_argument on mismatched n.
bool symplectic_form(const PhaseVector& x, const PhaseVector& y);

/// 2n x 2n bit matrix acting on PhaseVector by left multiplication.
///
/// Stored by columns: column k is the image of the k-th unit vector of the
/// flattened layout, so columns 0..n-1 are e_1..e_n and n..2n-1 are f_1..f_n.
class BinaryMatrix2n {
 public:
  BinaryMatrix2n() = default;
  explicit BinaryMatrix2n(int n);
  BinaryMatrix2n(int n, std::vector<PhaseVector> columns);

  static BinaryMatrix2n identity(int n);
  /// Row-major 0/1 entries; size must be 2n x 2n.
  static BinaryMatrix2n from_rows(const std::vector<std::vector<int>>& rows);

  int n() const { return n_; }
  int dim() const { return 2 * n_; }
  const PhaseVector& column(int k) const { return cols_[k]; }
  PhaseVector& column(int k) { return cols_[k]; }
  const std::vector<PhaseVector>& columns() const { return cols_; }
  bool at(int row, int col) const { return cols_[col].bit(row); }
  void set(int row, int col, bool v);

  /// Columns of the hyperbolic basis (e_1, f_1, ..., e_n, f_n).
  std::vector<PhaseVector> hyperbolic_pairs() const;

  PhaseVector apply(const PhaseVector& x) const;
  BinaryMatrix2n transpose() const;

  /// Elementary row operations, used by circuit synthesis (left action of gates).
  void row_xor(int target, int source);
  void row_swap(int a, int b);

  friend BinaryMatrix2n operator*(const BinaryMatrix2n& a, const BinaryMatrix2n& b);
  friend bool operator==(const BinaryMatrix2n&, const BinaryMatrix2n&) = default;

  std::vector<std::string> row_strings() const;

 private:
  int n_ = 0;
  std::vector<PhaseVector> cols_;
};

/// J = [[0, I], [I, 0]] in the flattened layout.
BinaryMatrix2n symplectic_j(int n);

/// True iff S preserves [.,.] and every column is singular, i.e. S in O+(2n,2).
bool is_in_oplus(const BinaryMatrix2n& s);

/// Basis of { v in span(ambient) : [v, b] = 0 for every b in basis }.
std::vector<PhaseVector> orthogonal_complement(const std::vector<PhaseVector>& basis,
                                               const std::vector<PhaseVector>& ambient);

/// Uniform sample from O+(2n,2) by iterated hyperbolic-pair extraction.
BinaryMatrix2n sample_oplus(int n, Rng& rng);

/// Gauss-Jordan inverse over F_2. Throws std::domain_error when singular.
BinaryMatrix2n invert_symplectic(const BinaryMatrix2n& s);

/// Every element of O+(2n,2) by exhaustive search. Only n <= 2 is accepted.
std::vector<BinaryMatrix2n> enumerate_oplus(int n);

/// Rejection loops abort after this many draws.
inline constexpr int kRejectionCap = 10000;

}  // namespace realrb

#endif  // REALRB_F2_H_
