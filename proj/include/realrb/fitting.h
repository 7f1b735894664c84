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

#ifndef REALRB_FITTING_H_
#define REALRB_FITTING_H_

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "realrb/rb_engine.h"

namespace realrb {

// Levenberg-Marquardt constants.
inline constexpr int kMaxFitIterations = 200;
inline constexpr double kRelativeStepTolerance = 1e-10;
inline constexpr double kInitialDamping = 1e-3;
// Standard errors below this are raised to it before weighting.
inline constexpr double kSigmaFloor = 1e-9;
// |corr| above this marks a pair of parameters as weakly identified.
inline constexpr double kWeakCorrelation = 0.99;

enum class FitStatus { kOk, kNonIdentifiable, kNotConverged };
std::string to_string(FitStatus s);

struct DataPoint {
  double m = 0;
  double y = 0;
  double sigma = 0;
};

struct FitResult {
  std::string method;
  std::vector<std::string> names;
  Eigen::VectorXd params;
  Eigen::MatrixXd covariance;
  double residual_norm = 0;  // sqrt of the weighted sum of squared residuals
  int iterations = 0;
  FitStatus status = FitStatus::kOk;
  std::vector<std::string> flags;

  bool ok() const { return status == FitStatus::kOk; }
  bool has_flag(const std::string& f) const;
  /// Throws std::out_of_range for an unknown name.
  double value(const std::string& name) const;
  double std_error(const std::string& name) const;
};

/// Fits y = D r^m: weighted log-linear start, then damped least squares on all points.
/// Parameters are named "D" and "r". Throws std::invalid_argument with fewer
/// than 3 distinct m or a negative sigma.
FitResult fit_single_exponential(const std::vector<DataPoint>& points);

/// Fits y = D r^m + K (parameters "D", "r", "K"); needs 4 distinct m.
/// K absorbs the offset a measurement error leaves in a difference curve.
FitResult fit_exponential_with_offset(const std::vector<DataPoint>& points);

/// y(prep, +) - y(prep, -) for each length, with standard errors added in quadrature.
std::vector<DataPoint> difference_curve(const DecayDataset& data, SpamLabel prep);

/// Single-exponential fits of the plus-preparation difference (rate b) and the
/// minus-preparation difference (rate c). Throws std::invalid_argument if a label is missing.
std::pair<FitResult, FitResult> difference_estimators(const DecayDataset& data);

/// Same curves fitted with fit_exponential_with_offset.
std::pair<FitResult, FitResult> difference_estimators_with_offset(const DecayDataset& data);

/// Joint fit of all four curves to A_k + b^m B_k + c^m C_k with shared b, c.
/// Parameter names: b, c, then A_pp, B_pp, C_pp, A_pm, ... in dataset label order.
/// Starts from the difference estimates (or `start`) with the offsets solved linearly.
FitResult full_model_fit(const DecayDataset& data, std::optional<std::pair<double, double>> start = std::nullopt);

struct FidelityEstimate {
  double value = 0;
  double std_error = 0;
  double ci_low = 0;  // 95% Gaussian interval
  double ci_high = 0;
};

struct Fidelities {
  FidelityEstimate average;
  FidelityEstimate rebit;
};

/// Average and rebit fidelities with first-order error propagation.
Fidelities estimate_fidelities(double b, double b_err, double c, double c_err, int d);
Fidelities estimate_fidelities(const FitResult& b_fit, const FitResult& c_fit, int d);
/// From a joint fit; uses the b-c covariance.
Fidelities estimate_fidelities(const FitResult& joint, int d);

nlohmann::json to_json(const FitResult& r);
FitResult fit_result_from_json(const nlohmann::json& j);
nlohmann::json to_json(const FidelityEstimate& f);

}  // namespace realrb

#endif  // REALRB_FITTING_H_
