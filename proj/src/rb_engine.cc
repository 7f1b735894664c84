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

#include "realrb/rb_engine.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>

#include <unsupported/Eigen/KroneckerProduct>

namespace realrb {

namespace {

using cd = std::complex<double>;

constexpr int kMaxSimulatedQubits = 4;

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

int count_y(const std::string& s) { return static_cast<int>(std::count(s.begin(), s.end(), 'Y')); }

void check_pauli_string(const std::string& s, int n, const std::string& field) {
  if (static_cast<int>(s.size()) != n) {
    throw std::invalid_argument(field + ": expected " + std::to_string(n) + " Pauli letters, got '" + s + "'");
  }
  if (s.find_first_not_of("IXYZ") != std::string::npos) {
    throw std::invalid_argument(field + ": letters must be I, X, Y or Z, got '" + s + "'");
  }
  if (s.find_first_not_of('I') == std::string::npos) {
    throw std::invalid_argument(field + ": the identity cannot define a preparation");
  }
}

}  // namespace

Channel build_channel(const NoiseSpec& spec, int n) {
  if (spec.kind == "identity") return Channel::identity(Eigen::Index{1} << n);
  if (spec.kind == "depolarizing") return depolarizing(n, spec.param);
  if (spec.kind == "dephasing") return dephasing(n, spec.param);
  if (spec.kind == "amplitude_damping") return amplitude_damping(n, spec.param);
  if (spec.kind == "coherent") return coherent(n, spec.axis, spec.param);
  if (spec.kind == "composite") {
    std::vector<Channel> parts;
    for (const auto& p : spec.parts) parts.push_back(build_channel(p, n));
    return composite(parts);
  }
  throw std::invalid_argument("unknown noise kind '" + spec.kind + "'");
}

std::string to_string(SpamLabel l) { return l == SpamLabel::kPlus ? "plus" : "minus"; }

SpamLabel spam_label_from_string(const std::string& s) {
  if (s == "plus" || s == "+") return SpamLabel::kPlus;
  if (s == "minus" || s == "-") return SpamLabel::kMinus;
  throw std::invalid_argument("unknown SPAM label '" + s + "'");
}

std::vector<int> default_lengths(int max_length) {
  std::vector<int> out;
  for (int m = 4; m <= max_length; m *= 2) out.push_back(m);
  return out;
}

void validate(ExperimentConfig& config) {
  if (config.n < 1 || config.n > kMaxSimulatedQubits) {
    throw std::invalid_argument("n: must be in [1, " + std::to_string(kMaxSimulatedQubits) + "], got " +
                                std::to_string(config.n));
  }
  if (config.lengths.empty()) config.lengths = default_lengths();
  std::set<int> seen;
  for (int m : config.lengths) {
    if (m < 1) throw std::invalid_argument("lengths: every length must be >= 1, got " + std::to_string(m));
    if (!seen.insert(m).second) throw std::invalid_argument("lengths: duplicate length " + std::to_string(m));
  }
  if (config.sequences < 1) throw std::invalid_argument("sequences: must be >= 1");
  if (config.shots < 0) throw std::invalid_argument("shots: must be >= 0");
  if (config.threads < 0) throw std::invalid_argument("threads: must be >= 0");

  const std::string rest(config.n - 1, 'I');
  if (config.spam.plus_pauli.empty()) config.spam.plus_pauli = "Z" + rest;
  if (config.spam.minus_pauli.empty()) config.spam.minus_pauli = "Y" + rest;
  check_pauli_string(config.spam.plus_pauli, config.n, "spam.plus_pauli");
  check_pauli_string(config.spam.minus_pauli, config.n, "spam.minus_pauli");
  if (count_y(config.spam.plus_pauli) % 2 != 0) {
    throw std::invalid_argument("spam.plus_pauli: must be symmetric (even number of Y)");
  }
  if (count_y(config.spam.minus_pauli) % 2 != 1) {
    throw std::invalid_argument("spam.minus_pauli: must be antisymmetric (odd number of Y)");
  }

  auto check_noise = [&](const NoiseSpec& spec, const std::string& field) {
    try {
      build_channel(spec, config.n);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(field + ": " + e.what());
    }
  };
  check_noise(config.noise, "noise");
  if (config.spam.prep_error) check_noise(*config.spam.prep_error, "spam.prep_error");
  if (config.spam.meas_error) check_noise(*config.spam.meas_error, "spam.meas_error");
}

ComplexMatrix pauli_eigenstate(const std::string& paulis) {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Ones(1);
  const double s = 1.0 / std::sqrt(2.0);
  for (char c : paulis) {
    Eigen::VectorXcd single(2);
    switch (c) {
      case 'I':
      case 'Z':
        single << 1, 0;
        break;
      case 'X':
        single << s, s;
        break;
      case 'Y':
        single << s, cd(0, s);
        break;
      default:
        throw std::invalid_argument(std::string("pauli_eigenstate: unknown letter '") + c + "'");
    }
    psi = Eigen::kroneckerProduct(psi, single).eval();
  }
  return psi * psi.adjoint();
}

SpamOperators build_spam(const ExperimentConfig& config) {
  const int n = config.n;
  const Eigen::Index d = Eigen::Index{1} << n;
  ComplexMatrix id = ComplexMatrix::Identity(d, d);
  std::optional<Channel> prep_err, meas_err;
  if (config.spam.prep_error) prep_err = build_channel(*config.spam.prep_error, n);
  if (config.spam.meas_error) meas_err = build_channel(*config.spam.meas_error, n);

  SpamOperators ops;
  const std::array<std::string, 2> paulis = {config.spam.plus_pauli, config.spam.minus_pauli};
  for (int k = 0; k < 2; k++) {
    ComplexMatrix rho = pauli_eigenstate(paulis[k]);
    ops.rho[k] = prep_err ? prep_err->apply(rho) : rho;
    ComplexMatrix p = pauli_string_matrix(paulis[k]);
    for (int s = 0; s < 2; s++) {
      ComplexMatrix e = 0.5 * (id + (s == 0 ? 1.0 : -1.0) * p);
      ops.effect[k][s] = meas_err ? meas_err->apply_adjoint(e) : e;
    }
  }
  return ops;
}

std::vector<int> DecayDataset::lengths() const {
  std::vector<int> out;
  for (const auto& r : rows) {
    if (std::find(out.begin(), out.end(), r.m) == out.end()) out.push_back(r.m);
  }
  std::sort(out.begin(), out.end());
  return out;
}

const DecayRow& DecayDataset::at(int m, SpamLabel prep, SpamLabel meas) const {
  for (const auto& r : rows) {
    if (r.m == m && r.prep == prep && r.meas == meas) return r;
  }
  throw std::out_of_range("dataset has no row for m=" + std::to_string(m) + " prep=" + to_string(prep) +
                          " meas=" + to_string(meas));
}

std::vector<RealCliffordElement> generate_sequence(int m, int n, Rng& rng) {
  if (m < 1) throw std::invalid_argument("generate_sequence: m must be >= 1");
  std::vector<RealCliffordElement> seq;
  seq.reserve(m + 1);
  const Eigen::Index d = Eigen::Index{1} << n;
  RealMatrix product = RealMatrix::Identity(d, d);
  BinaryMatrix2n label = BinaryMatrix2n::identity(n);
  for (int j = 0; j < m; j++) {
    seq.push_back(sample_real_clifford(n, rng));
    product = seq.back().dense * product;
    label = seq.back().symplectic * label;
  }
  seq.push_back(RealCliffordElement::from_dense(product.transpose(), invert_symplectic(label)));
  return seq;
}

double simulate_sequence(const std::vector<RealCliffordElement>& gates, const Channel& noise,
                         const ComplexMatrix& rho, const ComplexMatrix& effect, int shots, Rng& rng) {
  if (gates.empty()) throw std::invalid_argument("simulate_sequence: empty sequence");
  if (shots < 0) throw std::invalid_argument("simulate_sequence: shots must be >= 0");
  const Eigen::Index d = rho.rows();
  ComplexMatrix state = rho;
  for (size_t j = 0; j < gates.size(); j++) {
    if (j > 0) state = noise.apply(state);
    const RealMatrix& c = gates[j].dense;
    if (c.rows() != d) throw std::invalid_argument("simulate_sequence: gate dimension mismatch");
    state = c.cast<cd>() * state * c.transpose().cast<cd>();
  }
  double p = (effect * state).trace().real();
  if (!(p >= -1e-9 && p <= 1 + 1e-9)) {
    throw std::runtime_error("simulate_sequence: survival probability " + std::to_string(p) +
                             " outside [0, 1]; the noise channel is not CPTP");
  }
  p = std::clamp(p, 0.0, 1.0);
  if (shots == 0) return p;
  std::binomial_distribution<int> dist(shots, p);
  return static_cast<double>(dist(rng)) / shots;
}

SpamCoefficients abc_from_spam(const ComplexMatrix& rho, const ComplexMatrix& effect) {
  const Eigen::Index d = rho.rows();
  ComplexMatrix mixed = ComplexMatrix::Identity(d, d) / static_cast<double>(d);
  ComplexMatrix sym = 0.5 * (rho + rho.transpose());
  ComplexMatrix antisym = 0.5 * (rho - rho.transpose());
  return {(effect * mixed).trace().real(), (effect * (sym - rho.trace() * mixed)).trace().real(),
          (effect * antisym).trace().real()};
}

double decay_model(const SpamCoefficients& abc, double b, double c, int m) {
  return abc.a + std::pow(b, m) * abc.b + std::pow(c, m) * abc.c;
}

Rng work_item_rng(uint64_t seed, int m, SpamLabel prep, SpamLabel meas, int repetition) {
  uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ static_cast<uint64_t>(m));
  h = splitmix64(h ^ static_cast<uint64_t>(2 * index_of(prep) + index_of(meas)));
  h = splitmix64(h ^ static_cast<uint64_t>(repetition));
  return Rng(h);
}

DecayDataset run_campaign(const ExperimentConfig& input) {
  ExperimentConfig config = input;
  validate(config);
  const Channel noise = build_channel(config.noise, config.n);
  const SpamOperators spam = build_spam(config);

  struct Item {
    int m;
    SpamLabel prep, meas;
    int rep;
  };
  std::vector<Item> items;
  for (int m : config.lengths) {
    for (const auto& [prep, meas] : kLabelPairs) {
      for (int r = 0; r < config.sequences; r++) items.push_back({m, prep, meas, r});
    }
  }
  std::vector<double> results(items.size());

  std::atomic<size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    try {
      for (size_t k = next++; k < items.size(); k = next++) {
        const Item& it = items[k];
        Rng rng = work_item_rng(config.seed, it.m, it.prep, it.meas, it.rep);
        auto seq = generate_sequence(it.m, config.n, rng);
        results[k] = simulate_sequence(seq, noise, spam.state(it.prep), spam.measurement(it.prep, it.meas),
                                       config.shots, rng);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = items.size();
    }
  };
  const int threads = std::max(1, config.threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; t++) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  DecayDataset data;
  const int per_row = config.sequences;
  for (size_t start = 0; start < items.size(); start += per_row) {
    double sum = 0, sum_sq = 0;
    for (int r = 0; r < per_row; r++) {
      double v = results[start + r];
      sum += v;
      sum_sq += v * v;
    }
    const double count = per_row;
    const double mean = sum / count;
    double se = 0;
    if (per_row > 1) {
      se = std::sqrt(std::max(0.0, (sum_sq - count * mean * mean) / (count - 1)) / count);
    } else if (config.shots > 0) {
      se = std::sqrt(mean * (1 - mean) / config.shots);
    }
    const Item& it = items[start];
    data.rows.push_back({it.m, it.prep, it.meas, mean, se, config.sequences, config.shots});
  }
  return data;
}

}  // namespace realrb
