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

#include "realrb/design_cert.h"

#include <cmath>
#include <map>
#include <stdexcept>

#include <Eigen/SVD>
#include <unsupported/Eigen/KroneckerProduct>

namespace realrb {

void MatrixEnsemble::validate() const {
  if (members.empty()) throw std::invalid_argument("MatrixEnsemble: empty ensemble");
  const auto d = members.front().rows();
  for (const auto& o : members) {
    if (o.rows() != d || o.cols() != d) throw std::invalid_argument("MatrixEnsemble: mixed dimensions");
    if ((o * o.transpose() - RealMatrix::Identity(d, d)).norm() > 1e-10) {
      throw std::invalid_argument("MatrixEnsemble: member is not orthogonal");
    }
  }
}

double frame_potential(const MatrixEnsemble& ensemble) {
  ensemble.validate();
  const auto& m = ensemble.members;
  double sum = 0;
  for (const auto& a : m) {
    for (const auto& b : m) sum += std::pow(std::abs(a.cwiseProduct(b).sum()), 4);
  }
  const double k = static_cast<double>(m.size());
  return sum / (k * k);
}

MonteCarloEstimate frame_potential_monte_carlo(int n, size_t pairs, Rng& rng) {
  if (pairs < 2) throw std::invalid_argument("frame_potential_monte_carlo: need at least 2 pairs");
  double sum = 0, sum_sq = 0;
  for (size_t k = 0; k < pairs; k++) {
    RealMatrix a = sample_real_clifford(n, rng).dense;
    RealMatrix b = sample_real_clifford(n, rng).dense;
    double v = std::pow(std::abs(a.cwiseProduct(b).sum()), 4);
    sum += v;
    sum_sq += v * v;
  }
  const double count = static_cast<double>(pairs);
  const double mean = sum / count;
  const double var = std::max(0.0, (sum_sq - count * mean * mean) / (count - 1));
  return {mean, std::sqrt(var / count), pairs};
}

int commutant_dimension(const std::vector<RealMatrix>& generators, double rel_tolerance) {
  if (generators.empty()) throw std::invalid_argument("commutant_dimension: no generators");
  const auto d = generators.front().rows();
  for (const auto& g : generators) {
    if (g.rows() != d || g.cols() != d) throw std::invalid_argument("commutant_dimension: mixed dimensions");
  }
  const Eigen::Index dim = d * d;

  std::vector<RealMatrix> actions;
  std::vector<const RealMatrix*> off_diagonal;
  std::vector<std::vector<double>> signature(dim);
  for (const auto& g : generators) {
    actions.push_back(Eigen::kroneckerProduct(g, g).eval());
  }
  for (const auto& a : actions) {
    RealMatrix offdiag = a;
    offdiag.diagonal().setZero();
    if (offdiag.cwiseAbs().maxCoeff() > 1e-12) {
      off_diagonal.push_back(&a);
      continue;
    }
    for (Eigen::Index i = 0; i < dim; i++) signature[i].push_back(std::round(a(i, i) * 1e9) / 1e9);
  }

  // Diagonal actions D force X(i,j) = 0 unless D(i,i) = D(j,j); the surviving
  // entries are the unknowns of the remaining system.
  std::map<std::vector<double>, std::vector<Eigen::Index>> classes;
  for (Eigen::Index i = 0; i < dim; i++) classes[signature[i]].push_back(i);
  std::vector<std::pair<Eigen::Index, Eigen::Index>> unknowns;
  for (const auto& [sig, members] : classes) {
    for (auto i : members) {
      for (auto j : members) unknowns.emplace_back(i, j);
    }
  }
  const auto num_unknowns = static_cast<Eigen::Index>(unknowns.size());
  if (off_diagonal.empty()) return static_cast<int>(num_unknowns);

  // Column u holds the coefficients of X(i,j) in (A X - X A)(r,c) for every A.
  RealMatrix system = RealMatrix::Zero(static_cast<Eigen::Index>(off_diagonal.size()) * dim * dim, num_unknowns);
  for (size_t g = 0; g < off_diagonal.size(); g++) {
    const RealMatrix& a = *off_diagonal[g];
    const Eigen::Index base = static_cast<Eigen::Index>(g) * dim * dim;
    for (Eigen::Index u = 0; u < num_unknowns; u++) {
      const auto [i, j] = unknowns[u];
      for (Eigen::Index r = 0; r < dim; r++) {
        if (a(r, i) != 0) system(base + r * dim + j, u) += a(r, i);
      }
      for (Eigen::Index c = 0; c < dim; c++) {
        if (a(j, c) != 0) system(base + i * dim + c, u) -= a(j, c);
      }
    }
  }

  Eigen::BDCSVD<RealMatrix> svd(system);
  const auto& sv = svd.singularValues();
  const double cutoff = rel_tolerance * (sv.size() > 0 ? sv.maxCoeff() : 0.0);
  Eigen::Index rank = 0;
  for (Eigen::Index k = 0; k < sv.size(); k++) {
    if (sv(k) > cutoff) rank++;
  }
  return static_cast<int>(num_unknowns - rank);
}

CertificationResult certify_orthogonal_2design(const MatrixEnsemble& ensemble, double tolerance) {
  double p = frame_potential(ensemble);
  return {std::abs(p - 3.0) <= tolerance, p, tolerance, "frame_potential"};
}

CertificationResult certify_orthogonal_2design(const std::vector<RealMatrix>& generators) {
  int dim = commutant_dimension(generators);
  return {dim == 3, static_cast<double>(dim), 0.0, "commutant_dimension"};
}

}  // namespace realrb
