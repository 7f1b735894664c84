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

#ifndef REALRB_DESIGN_CERT_H_
#define REALRB_DESIGN_CERT_H_

#include <string>
#include <vector>

#include "realrb/channels.h"
#include "realrb/clifford.h"

namespace realrb {

/// Finite set of real orthogonal matrices of a common dimension.
struct MatrixEnsemble {
  std::vector<RealMatrix> members;
  std::string label;

  /// Throws std::invalid_argument if any member is not orthogonal to 1e-10.
  void validate() const;
};

/// (1/K^2) sum_{k,k'} |tr(O_k^T O_k')|^4.
double frame_potential(const MatrixEnsemble& ensemble);

/// Mean of |tr(O^T O')|^4 over independent pairs drawn from the real Clifford sampler.
MonteCarloEstimate frame_potential_monte_carlo(int n, size_t pairs, Rng& rng);

/// Relative singular-value cutoff used by commutant_dimension.
inline constexpr double kCommutantRankTolerance = 1e-8;

/// dim { X : [X, g (x) g] = 0 for all generators g }.
///
/// Diagonal generators are handled exactly by restricting X to index pairs
/// with equal diagonal signatures; the remaining generators contribute a
/// stacked linear system whose numerical rank is taken from an SVD.
int commutant_dimension(const std::vector<RealMatrix>& generators,
                        double rel_tolerance = kCommutantRankTolerance);

struct CertificationResult {
  bool certified = false;
  double value = 0;      // frame potential, or commutant dimension
  double tolerance = 0;  // allowed deviation from the design value
  std::string method;
};

/// Frame-potential test: certified iff |P - 3| <= tolerance.
CertificationResult certify_orthogonal_2design(const MatrixEnsemble& ensemble, double tolerance = 1e-6);
/// Commutant test: certified iff the commutant dimension is exactly 3.
CertificationResult certify_orthogonal_2design(const std::vector<RealMatrix>& generators);

}  // namespace realrb

#endif  // REALRB_DESIGN_CERT_H_
