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

#ifndef REALRB_RB_ENGINE_H_
#define REALRB_RB_ENGINE_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "realrb/channels.h"
#include "realrb/clifford.h"

namespace realrb {

/// Declarative noise description, turned into a Channel by build_channel().
///
/// kinds: identity, depolarizing (param = p), dephasing (param = gamma),
/// amplitude_damping (param = gamma), coherent (axis, param = epsilon),
/// composite (parts, applied in order).
struct NoiseSpec {
  std::string kind = "identity";
  double param = 0;
  std::string axis;
  std::vector<NoiseSpec> parts;

  friend bool operator==(const NoiseSpec&, const NoiseSpec&) = default;
};

Channel build_channel(const NoiseSpec& spec, int n);

/// Label of a preparation or measurement: the symmetric (+) or antisymmetric (-) family.
enum class SpamLabel { kPlus, kMinus };
std::string to_string(SpamLabel l);
SpamLabel spam_label_from_string(const std::string& s);

/// State preparation and measurement settings.
///
/// Each preparation is the +1 eigenstate of a defining Pauli string (I and Z
/// qubits in |0>, X in |+>, Y in |+i>), and E_+- = (I +- P)/2 for the same P.
/// The plus Pauli must be symmetric (even number of Y) and the minus Pauli
/// antisymmetric (odd number of Y).
struct SpamSpec {
  std::string plus_pauli;   // default "Z" + "I"*(n-1)
  std::string minus_pauli;  // default "Y" + "I"*(n-1)
  std::optional<NoiseSpec> prep_error;
  std::optional<NoiseSpec> meas_error;

  friend bool operator==(const SpamSpec&, const SpamSpec&) = default;
};

struct ExperimentConfig {
  int n = 1;
  std::vector<int> lengths;
  int sequences = 50;  // M, random sequences per (length, label)
  int shots = 0;       // 0 means exact expectation values
  NoiseSpec noise;
  SpamSpec spam;
  uint64_t seed = 0;
  int threads = 1;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Fills default SPAM Paulis and lengths, then checks every field.
/// Throws std::invalid_argument with a field-qualified message.
void validate(ExperimentConfig& config);

/// {4, 8, 16, ...} up to and including max_length.
std::vector<int> default_lengths(int max_length = 256);

inline int index_of(SpamLabel l) { return l == SpamLabel::kPlus ? 0 : 1; }

/// Effective (error-included) preparation and effect operators. The effects
/// E_+- for a preparation are the eigenprojectors of that preparation's Pauli.
struct SpamOperators {
  std::array<ComplexMatrix, 2> rho;                    // [prep]
  std::array<std::array<ComplexMatrix, 2>, 2> effect;  // [prep][meas]

  const ComplexMatrix& state(SpamLabel prep) const { return rho[index_of(prep)]; }
  const ComplexMatrix& measurement(SpamLabel prep, SpamLabel meas) const {
    return effect[index_of(prep)][index_of(meas)];
  }
};

SpamOperators build_spam(const ExperimentConfig& config);

/// Pure +1 eigenstate of a product Pauli string (see SpamSpec).
ComplexMatrix pauli_eigenstate(const std::string& paulis);

struct DecayRow {
  int m = 0;
  SpamLabel prep = SpamLabel::kPlus;
  SpamLabel meas = SpamLabel::kPlus;
  double mean = 0;
  double std_error = 0;
  int sequences = 0;
  int shots = 0;
};

struct DecayDataset {
  std::vector<DecayRow> rows;

  std::vector<int> lengths() const;
  /// Row for (m, prep, meas); throws std::out_of_range if absent.
  const DecayRow& at(int m, SpamLabel prep, SpamLabel meas) const;
};

/// m uniformly random real Cliffords followed by the inverse of their product.
std::vector<RealCliffordElement> generate_sequence(int m, int n, Rng& rng);

/// Survival probability tr[E S(rho)] with `noise` acting between consecutive
/// gates. shots == 0 returns the exact value, otherwise a binomial frequency.
/// Throws std::runtime_error if the probability leaves [-1e-9, 1 + 1e-9].
double simulate_sequence(const std::vector<RealCliffordElement>& gates, const Channel& noise,
                         const ComplexMatrix& rho, const ComplexMatrix& effect, int shots, Rng& rng);

struct SpamCoefficients {
  double a = 0, b = 0, c = 0;
};

/// A = tr[E I/d], B = tr[E (sym(rho) - I/d)], C = tr[E antisym(rho)].
SpamCoefficients abc_from_spam(const ComplexMatrix& rho, const ComplexMatrix& effect);

/// A + b^m B + c^m C.
double decay_model(const SpamCoefficients& abc, double b, double c, int m);

/// Independent stream for one work item, derived from (seed, m, labels, repetition).
Rng work_item_rng(uint64_t seed, int m, SpamLabel prep, SpamLabel meas, int repetition);

/// Runs every (length, label pair, repetition) and aggregates rows in a fixed
/// order: lengths ascending, then (+,+), (+,-), (-,+), (-,-).
DecayDataset run_campaign(const ExperimentConfig& config);

/// Labels in dataset order.
inline constexpr std::array<std::pair<SpamLabel, SpamLabel>, 4> kLabelPairs = {{
    {SpamLabel::kPlus, SpamLabel::kPlus},
    {SpamLabel::kPlus, SpamLabel::kMinus},
    {SpamLabel::kMinus, SpamLabel::kPlus},
    {SpamLabel::kMinus, SpamLabel::kMinus},
}};

}  // namespace realrb

#endif  // REALRB_RB_ENGINE_H_
