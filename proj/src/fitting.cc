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

#include "realrb/fitting.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <stdexcept>

namespace realrb {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Fills weighted residuals (y - model) / sigma and their Jacobian.
using ResidualFn = std::function<void(const VectorXd& x, VectorXd& r, MatrixXd& jac)>;

struct LmOutcome {
  VectorXd x;
  MatrixXd jac;
  double cost = 0;
  int iterations = 0;
  bool converged = false;
};

LmOutcome levenberg_marquardt(const ResidualFn& fn, VectorXd x) {
  VectorXd r;
  MatrixXd jac;
  fn(x, r, jac);
  double cost = r.squaredNorm();
  double lambda = kInitialDamping;
  LmOutcome out;
  for (int it = 1; it <= kMaxFitIterations; it++) {
    out.iterations = it;
    MatrixXd a = jac.transpose() * jac;
    VectorXd g = jac.transpose() * r;
    VectorXd diag = a.diagonal();
    const double floor = 1e-12 * std::max(1.0, diag.maxCoeff());
    bool accepted = false;
    while (lambda < 1e16) {
      MatrixXd damped = a;
      for (Eigen::Index k = 0; k < diag.size(); k++) damped(k, k) += lambda * std::max(diag(k), floor);
      VectorXd step = damped.completeOrthogonalDecomposition().solve(-g);
      VectorXd trial = x + step;
      VectorXd r_trial;
      MatrixXd jac_trial;
      fn(trial, r_trial, jac_trial);
      const double trial_cost = r_trial.squaredNorm();
      if (std::isfinite(trial_cost) && trial_cost <= cost) {
        const bool small = step.norm() <= kRelativeStepTolerance * (x.norm() + kRelativeStepTolerance);
        x = trial;
        r = r_trial;
        jac = jac_trial;
        cost = trial_cost;
        lambda = std::max(lambda / 10, 1e-12);
        accepted = true;
        if (small) out.converged = true;
        break;
      }
      lambda *= 10;
    }
    // No descent direction left at any damping: a numerical minimum.
    if (!accepted) out.converged = true;
    if (out.converged) break;
  }
  out.x = x;
  out.jac = jac;
  out.cost = cost;
  return out;
}

MatrixXd covariance_from_jacobian(const MatrixXd& jac) {
  MatrixXd info = jac.transpose() * jac;
  MatrixXd cov = info.completeOrthogonalDecomposition().pseudoInverse();
  return 0.5 * (cov + cov.transpose());
}

double floored(double sigma) { return std::max(sigma, kSigmaFloor); }

void check_points(const std::vector<DataPoint>& points, size_t min_distinct) {
  std::set<double> ms;
  for (const auto& p : points) {
    if (!(p.sigma >= 0)) throw std::invalid_argument("fit: standard errors must be non-negative");
    if (!std::isfinite(p.y)) throw std::invalid_argument("fit: non-finite observation");
    ms.insert(p.m);
  }
  if (ms.size() < min_distinct) {
    throw std::invalid_argument("fit: need at least " + std::to_string(min_distinct) + " distinct lengths, got " +
                                std::to_string(ms.size()));
  }
}

// Weighted fit of log y = log D + m log r over the positive points.
std::optional<std::pair<double, double>> log_linear_start(const std::vector<DataPoint>& points) {
  std::vector<DataPoint> pos;
  std::set<double> ms;
  for (const auto& p : points) {
    if (p.y > 0) {
      pos.push_back(p);
      ms.insert(p.m);
    }
  }
  if (ms.size() < 2) return std::nullopt;
  MatrixXd design(pos.size(), 2);
  VectorXd rhs(pos.size());
  double wmax = 0;
  std::vector<double> w(pos.size());
  for (size_t k = 0; k < pos.size(); k++) {
    w[k] = pos[k].y / floored(pos[k].sigma);
    wmax = std::max(wmax, w[k]);
  }
  for (size_t k = 0; k < pos.size(); k++) {
    const double s = w[k] / wmax;
    design(k, 0) = s;
    design(k, 1) = s * pos[k].m;
    rhs(k) = s * std::log(pos[k].y);
  }
  VectorXd coef = design.colPivHouseholderQr().solve(rhs);
  return std::make_pair(std::exp(coef(0)), std::exp(coef(1)));
}

void flag_rate(FitResult& r, const std::string& name) {
  const double v = r.value(name);
  if (!(v > 0 && v <= 1 + 1e-9)) r.flags.push_back(name + "_outside_unit_interval");
}

}  // namespace

std::string to_string(FitStatus s) {
  switch (s) {
    case FitStatus::kOk:
      return "ok";
    case FitStatus::kNonIdentifiable:
      return "non_identifiable";
    case FitStatus::kNotConverged:
      return "not_converged";
  }
  return "unknown";
}

bool FitResult::has_flag(const std::string& f) const { return std::find(flags.begin(), flags.end(), f) != flags.end(); }

double FitResult::value(const std::string& name) const {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw std::out_of_range("FitResult has no parameter '" + name + "'");
  return params(it - names.begin());
}

double FitResult::std_error(const std::string& name) const {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw std::out_of_range("FitResult has no parameter '" + name + "'");
  const auto k = it - names.begin();
  return std::sqrt(std::max(0.0, covariance(k, k)));
}

FitResult fit_single_exponential(const std::vector<DataPoint>& points) {
  check_points(points, 3);
  FitResult result;
  result.method = "single_exponential";
  result.names = {"D", "r"};

  double lo = points.front().y, hi = lo, max_sigma = 0, scale = 0;
  bool all_below_noise = true;
  for (const auto& p : points) {
    lo = std::min(lo, p.y);
    hi = std::max(hi, p.y);
    max_sigma = std::max(max_sigma, p.sigma);
    scale = std::max(scale, std::abs(p.y));
    if (std::abs(p.y) > 3 * p.sigma) all_below_noise = false;
  }
  const bool constant = hi - lo <= 1e-12 * std::max(1.0, scale) + 2 * max_sigma;

  VectorXd x(2);
  if (auto start = log_linear_start(points)) {
    x << start->first, start->second;
  } else {
    x << (hi + lo) / 2, 0.9;
    result.flags.push_back("log_start_unavailable");
  }

  auto fn = [&](const VectorXd& v, VectorXd& r, MatrixXd& jac) {
    r.resize(points.size());
    jac.resize(points.size(), 2);
    for (size_t k = 0; k < points.size(); k++) {
      const auto& p = points[k];
      const double s = floored(p.sigma);
      const double pw = std::pow(v(1), p.m);
      r(k) = (p.y - v(0) * pw) / s;
      jac(k, 0) = -pw / s;
      jac(k, 1) = -v(0) * p.m * std::pow(v(1), p.m - 1) / s;
    }
  };
  LmOutcome lm = levenberg_marquardt(fn, x);
  result.params = lm.x;
  result.covariance = covariance_from_jacobian(lm.jac);
  result.residual_norm = std::sqrt(lm.cost);
  result.iterations = lm.iterations;

  if (all_below_noise) {
    result.status = FitStatus::kNonIdentifiable;
    result.flags.push_back("below_noise_floor");
  } else if (constant) {
    result.status = FitStatus::kNonIdentifiable;
    result.flags.push_back("no_decay");
  } else if (!lm.converged) {
    result.status = FitStatus::kNotConverged;
  }
  flag_rate(result, "r");
  return result;
}

FitResult fit_exponential_with_offset(const std::vector<DataPoint>& points) {
  check_points(points, 4);
  // Start from the offset-free fit of the curve.
  FitResult start = fit_single_exponential(points);
  FitResult result;
  result.method = "exponential_with_offset";
  result.names = {"D", "r", "K"};
  VectorXd x(3);
  x << start.value("D"), std::clamp(start.value("r"), 1e-3, 1.0), 0;

  auto fn = [&](const VectorXd& v, VectorXd& r, MatrixXd& jac) {
    r.resize(points.size());
    jac.resize(points.size(), 3);
    for (size_t k = 0; k < points.size(); k++) {
      const auto& p = points[k];
      const double s = floored(p.sigma);
      const double pw = std::pow(v(1), p.m);
      r(k) = (p.y - v(0) * pw - v(2)) / s;
      jac(k, 0) = -pw / s;
      jac(k, 1) = -v(0) * p.m * std::pow(v(1), p.m - 1) / s;
      jac(k, 2) = -1 / s;
    }
  };
  LmOutcome lm = levenberg_marquardt(fn, x);
  result.params = lm.x;
  result.covariance = covariance_from_jacobian(lm.jac);
  result.residual_norm = std::sqrt(lm.cost);
  result.iterations = lm.iterations;
  if (start.status == FitStatus::kNonIdentifiable) {
    result.status = FitStatus::kNonIdentifiable;
    result.flags = start.flags;
  } else if (!lm.converged) {
    result.status = FitStatus::kNotConverged;
  }
  flag_rate(result, "r");
  return result;
}

std::vector<DataPoint> difference_curve(const DecayDataset& data, SpamLabel prep) {
  std::vector<DataPoint> out;
  for (int m : data.lengths()) {
    const DecayRow* plus = nullptr;
    const DecayRow* minus = nullptr;
    try {
      plus = &data.at(m, prep, SpamLabel::kPlus);
      minus = &data.at(m, prep, SpamLabel::kMinus);
    } catch (const std::out_of_range& e) {
      throw std::invalid_argument(std::string("difference_curve: ") + e.what());
    }
    out.push_back({static_cast<double>(m), plus->mean - minus->mean, std::hypot(plus->std_error, minus->std_error)});
  }
  return out;
}

std::pair<FitResult, FitResult> difference_estimators(const DecayDataset& data) {
  FitResult b = fit_single_exponential(difference_curve(data, SpamLabel::kPlus));
  FitResult c = fit_single_exponential(difference_curve(data, SpamLabel::kMinus));
  b.method = "difference_plus";
  c.method = "difference_minus";
  return {std::move(b), std::move(c)};
}

std::pair<FitResult, FitResult> difference_estimators_with_offset(const DecayDataset& data) {
  FitResult b = fit_exponential_with_offset(difference_curve(data, SpamLabel::kPlus));
  FitResult c = fit_exponential_with_offset(difference_curve(data, SpamLabel::kMinus));
  b.method = "difference_plus_offset";
  c.method = "difference_minus_offset";
  return {std::move(b), std::move(c)};
}

FitResult full_model_fit(const DecayDataset& data, std::optional<std::pair<double, double>> start) {
  const std::vector<int> lengths = data.lengths();
  if (lengths.size() < 5) {
    throw std::invalid_argument("full_model_fit: need at least 5 distinct lengths, got " +
                                std::to_string(lengths.size()));
  }
  std::array<std::vector<DataPoint>, 4> curves;
  for (size_t k = 0; k < 4; k++) {
    for (int m : lengths) {
      const DecayRow* row = nullptr;
      try {
        row = &data.at(m, kLabelPairs[k].first, kLabelPairs[k].second);
      } catch (const std::out_of_range& e) {
        throw std::invalid_argument(std::string("full_model_fit: ") + e.what());
      }
      curves[k].push_back({static_cast<double>(m), row->mean, row->std_error});
    }
  }

  double b0 = 0.95, c0 = 0.95;
  if (start) {
    std::tie(b0, c0) = *start;
  } else {
    auto [bf, cf] = difference_estimators(data);
    if (std::isfinite(bf.value("r")) && bf.value("r") > 0) b0 = bf.value("r");
    if (std::isfinite(cf.value("r")) && cf.value("r") > 0) c0 = cf.value("r");
  }

  VectorXd x(14);
  x(0) = b0;
  x(1) = c0;
  for (size_t k = 0; k < 4; k++) {
    const auto& pts = curves[k];
    MatrixXd design(pts.size(), 3);
    VectorXd rhs(pts.size());
    for (size_t i = 0; i < pts.size(); i++) {
      const double s = floored(pts[i].sigma);
      design(i, 0) = 1 / s;
      design(i, 1) = std::pow(b0, pts[i].m) / s;
      design(i, 2) = std::pow(c0, pts[i].m) / s;
      rhs(i) = pts[i].y / s;
    }
    x.segment(2 + 3 * k, 3) = design.completeOrthogonalDecomposition().solve(rhs);
  }

  const size_t total = 4 * lengths.size();
  auto fn = [&](const VectorXd& v, VectorXd& r, MatrixXd& jac) {
    r.resize(total);
    jac = MatrixXd::Zero(total, 14);
    size_t row = 0;
    for (size_t k = 0; k < 4; k++) {
      const double a = v(2 + 3 * k), bb = v(3 + 3 * k), cc = v(4 + 3 * k);
      for (const auto& p : curves[k]) {
        const double s = floored(p.sigma);
        const double pb = std::pow(v(0), p.m), pc = std::pow(v(1), p.m);
        r(row) = (p.y - a - bb * pb - cc * pc) / s;
        jac(row, 0) = -bb * p.m * std::pow(v(0), p.m - 1) / s;
        jac(row, 1) = -cc * p.m * std::pow(v(1), p.m - 1) / s;
        jac(row, 2 + 3 * k) = -1 / s;
        jac(row, 3 + 3 * k) = -pb / s;
        jac(row, 4 + 3 * k) = -pc / s;
        row++;
      }
    }
  };
  LmOutcome lm = levenberg_marquardt(fn, x);

  FitResult result;
  result.method = "full_model";
  result.names = {"b", "c"};
  for (const char* label : {"pp", "pm", "mp", "mm"}) {
    for (const char* p : {"A", "B", "C"}) result.names.push_back(std::string(p) + "_" + label);
  }
  result.params = lm.x;
  result.covariance = covariance_from_jacobian(lm.jac);
  result.residual_norm = std::sqrt(lm.cost);
  result.iterations = lm.iterations;
  if (!lm.converged) result.status = FitStatus::kNotConverged;

  auto corr = [&](Eigen::Index i, Eigen::Index j) {
    const double denom = std::sqrt(result.covariance(i, i) * result.covariance(j, j));
    return denom > 0 ? result.covariance(i, j) / denom : 1.0;
  };
  bool weak = std::abs(corr(0, 1)) > kWeakCorrelation;
  for (Eigen::Index k = 0; k < 4; k++) {
    if (std::abs(corr(3 + 3 * k, 4 + 3 * k)) > kWeakCorrelation) weak = true;
  }
  if (weak) result.flags.push_back("weakly_identified_b_c_split");
  flag_rate(result, "b");
  flag_rate(result, "c");
  return result;
}

namespace {

FidelityEstimate make_estimate(double value, double var) {
  const double se = std::sqrt(std::max(0.0, var));
  return {value, se, value - 1.96 * se, value + 1.96 * se};
}

Fidelities fidelities_with_covariance(double b, double c, const Eigen::Matrix2d& cov, int d) {
  if (d < 2) throw std::invalid_argument("estimate_fidelities: d must be >= 2");
  const double dd = d;
  const double denom = 2 * dd * (dd + 1);
  Eigen::Vector2d g_avg((dd * dd + dd - 2) / denom, dd * (dd - 1) / denom);
  Eigen::Vector2d g_rebit((dd - 1) / dd, 0);
  Fidelities f;
  f.average = make_estimate(avg_fidelity_from_bc(b, c, d), g_avg.dot(cov * g_avg));
  f.rebit = make_estimate(rebit_fidelity_from_b(b, d), g_rebit.dot(cov * g_rebit));
  return f;
}

}  // namespace

Fidelities estimate_fidelities(double b, double b_err, double c, double c_err, int d) {
  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
  cov(0, 0) = b_err * b_err;
  cov(1, 1) = c_err * c_err;
  return fidelities_with_covariance(b, c, cov, d);
}

Fidelities estimate_fidelities(const FitResult& b_fit, const FitResult& c_fit, int d) {
  return estimate_fidelities(b_fit.value("r"), b_fit.std_error("r"), c_fit.value("r"), c_fit.std_error("r"), d);
}

Fidelities estimate_fidelities(const FitResult& joint, int d) {
  Eigen::Matrix2d cov = joint.covariance.topLeftCorner(2, 2);
  return fidelities_with_covariance(joint.value("b"), joint.value("c"), cov, d);
}

nlohmann::json to_json(const FitResult& r) {
  nlohmann::json j;
  j["method"] = r.method;
  j["status"] = to_string(r.status);
  j["flags"] = r.flags;
  j["iterations"] = r.iterations;
  j["residual_norm"] = r.residual_norm;
  j["names"] = r.names;
  j["params"] = std::vector<double>(r.params.data(), r.params.data() + r.params.size());
  std::vector<double> errors;
  for (const auto& n : r.names) errors.push_back(r.std_error(n));
  j["std_errors"] = errors;
  nlohmann::json cov = nlohmann::json::array();
  for (Eigen::Index i = 0; i < r.covariance.rows(); i++) {
    std::vector<double> row(r.covariance.cols());
    for (Eigen::Index k = 0; k < r.covariance.cols(); k++) row[k] = r.covariance(i, k);
    cov.push_back(row);
  }
  j["covariance"] = cov;
  return j;
}

FitResult fit_result_from_json(const nlohmann::json& j) {
  FitResult r;
  r.method = j.at("method").get<std::string>();
  const auto status = j.at("status").get<std::string>();
  if (status == "ok") {
    r.status = FitStatus::kOk;
  } else if (status == "non_identifiable") {
    r.status = FitStatus::kNonIdentifiable;
  } else if (status == "not_converged") {
    r.status = FitStatus::kNotConverged;
  } else {
    throw std::invalid_argument("unknown fit status '" + status + "'");
  }
  r.flags = j.at("flags").get<std::vector<std::string>>();
  r.iterations = j.at("iterations").get<int>();
  r.residual_norm = j.at("residual_norm").get<double>();
  r.names = j.at("names").get<std::vector<std::string>>();
  const auto params = j.at("params").get<std::vector<double>>();
  if (params.size() != r.names.size()) throw std::invalid_argument("fit result: names and params differ in length");
  r.params = Eigen::Map<const VectorXd>(params.data(), static_cast<Eigen::Index>(params.size()));
  const auto& cov = j.at("covariance");
  const auto np = static_cast<Eigen::Index>(params.size());
  r.covariance = MatrixXd::Zero(np, np);
  if (static_cast<Eigen::Index>(cov.size()) != np) throw std::invalid_argument("fit result: covariance shape");
  for (Eigen::Index i = 0; i < np; i++) {
    const auto row = cov.at(i).get<std::vector<double>>();
    if (static_cast<Eigen::Index>(row.size()) != np) throw std::invalid_argument("fit result: covariance shape");
    for (Eigen::Index k = 0; k < np; k++) r.covariance(i, k) = row[k];
  }
  return r;
}

nlohmann::json to_json(const FidelityEstimate& f) {
  return {{"value", f.value}, {"std_error", f.std_error}, {"ci95", {f.ci_low, f.ci_high}}};
}

}  // namespace realrb
