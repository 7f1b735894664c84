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

// realrb: sample, certify, run, fit and report.
//
// Exit codes: 0 success, 1 invalid input, 2 numerical failure (flagged fit,
// failed certification, broken channel).

#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "realrb/design_cert.h"
#include "realrb/fitting.h"
#include "realrb/io.h"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace realrb;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitNumerical = 2;

// Raised for bad user input so main() can map it to exit code 1.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SampleOptions {
  int n = 1;
  int count = 1;
  uint64_t seed = 0;
  bool dense = false;
};

int cmd_sample(const SampleOptions& o) {
  if (o.n < 1 || o.n > kMaxQubits) {
    throw UsageError("sample: n must be in [1, " + std::to_string(kMaxQubits) + "]");
  }
  if (o.dense && o.n > kDenseQubitCap) {
    throw UsageError("sample: --dense needs n <= " + std::to_string(kDenseQubitCap));
  }
  if (o.count < 0) throw UsageError("sample: count must be >= 0");
  Rng rng(o.seed);
  for (int k = 0; k < o.count; k++) {
    BinaryMatrix2n s = sample_oplus(o.n, rng);
    PauliLabel pauli{PhaseVector::from_flat(o.n, rng()), 1};
    json line = {{"index", k},
                 {"n", o.n},
                 {"symplectic", s.row_strings()},
                 {"pauli", pauli.str()},
                 {"member", is_in_oplus(s)},
                 {"circuit", synthesize_clifford(s).str()}};
    if (o.dense) {
      RealMatrix u = RealCliffordElement::from_parts(s, pauli).dense;
      json rows = json::array();
      for (Eigen::Index i = 0; i < u.rows(); i++) {
        std::vector<int> row(u.cols());
        for (Eigen::Index j = 0; j < u.cols(); j++) row[j] = static_cast<int>(std::lround(u(i, j)));
        rows.push_back(row);
      }
      line["dense"] = rows;
    }
    std::cout << line.dump() << "\n";
  }
  return kExitOk;
}

int cmd_certify(int n) {
  constexpr int kCommutantCap = 3;
  if (n < 1 || n > kCommutantCap) {
    throw UsageError("certify: n must be in [1, " + std::to_string(kCommutantCap) + "]");
  }
  bool ok = true;
  std::cout << std::fixed << std::setprecision(6);
  if (n <= 2) {
    MatrixEnsemble group{enumerate_closure(real_clifford_generators(n), 5000), "real Clifford"};
    auto fp = certify_orthogonal_2design(group);
    std::cout << "real Clifford group, n=" << n << ", |C| = " << group.members.size() << ": P = " << fp.value << ", "
              << (fp.certified ? "certified" : "not certified") << "\n";
    ok = ok && fp.certified;
    MatrixEnsemble control{enumerate_closure(real_pauli_generators(n), 5000), "real Pauli"};
    auto fc = certify_orthogonal_2design(control);
    std::cout << "control real Pauli group, n=" << n << ", |E| = " << control.members.size() << ": P = " << fc.value
              << ", " << (fc.certified ? "certified" : "not certified") << "\n";
  }
  auto cd = certify_orthogonal_2design(real_clifford_generators(n));
  std::cout << "commutant dim = " << static_cast<int>(cd.value) << ", " << (cd.certified ? "certified" : "not certified")
            << "\n";
  ok = ok && cd.certified;
  return ok ? kExitOk : kExitNumerical;
}

struct RunOptions {
  std::string config;
  std::string out = "realrb_out";
  std::optional<int> threads;
  std::optional<int> shots;
  std::optional<uint64_t> seed;
};

int resolve_threads(const RunOptions& o, const ExperimentConfig& config) {
  if (o.threads) return *o.threads;
  if (const char* env = std::getenv("REALRB_THREADS")) {
    try {
      return std::stoi(env);
    } catch (const std::exception&) {
      throw UsageError(std::string("REALRB_THREADS: expected an integer, got '") + env + "'");
    }
  }
  return config.threads;
}

int cmd_run(const RunOptions& o) {
  LoadedConfig loaded = load_config(o.config);
  ExperimentConfig config = loaded.config;
  if (o.shots) config.shots = *o.shots;
  if (o.seed) {
    config.seed = *o.seed;
  } else if (!loaded.seed_given) {
    config.seed = (static_cast<uint64_t>(std::random_device{}()) << 32) | std::random_device{}();
    std::cerr << "no seed given; using " << config.seed << "\n";
  }
  config.threads = resolve_threads(o, config);
  if (config.threads == 0) config.threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  try {
    validate(config);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  const std::string started = utc_timestamp();
  DecayDataset data = run_campaign(config);
  const std::string finished = utc_timestamp();

  fs::create_directories(o.out);
  const std::string csv = dataset_to_csv(data);
  const std::string dataset_json = dataset_to_json(data, config).dump(2) + "\n";
  json cfg = to_json(config);
  cfg.erase("threads");
  const std::string config_json = cfg.dump(2) + "\n";
  write_file(fs::path(o.out) / "dataset.csv", csv);
  write_file(fs::path(o.out) / "dataset.json", dataset_json);
  write_file(fs::path(o.out) / "config.json", config_json);
  json manifest = {{"tool", "realrb"},
                   {"version", kToolVersion},
                   {"seed", config.seed},
                   {"threads", config.threads},
                   {"config", cfg},
                   {"started_at", started},
                   {"finished_at", finished},
                   {"outputs",
                    {{"dataset.csv", sha256_hex(csv)},
                     {"dataset.json", sha256_hex(dataset_json)},
                     {"config.json", sha256_hex(config_json)}}}};
  write_file(fs::path(o.out) / "manifest.json", manifest.dump(2) + "\n");
  std::cout << "wrote " << data.rows.size() << " rows to " << (fs::path(o.out) / "dataset.csv").string() << "\n";
  return kExitOk;
}

struct FitOptions {
  std::string dataset;
  std::string out;
  int n = 0;
};

void print_fit(const std::string& label, const FitResult& r, const std::string& name) {
  std::cout << label << " = " << std::setprecision(8) << r.value(name) << " +- " << std::setprecision(3)
            << r.std_error(name) << "  [" << to_string(r.status);
  for (const auto& f : r.flags) std::cout << ", " << f;
  std::cout << "]\n";
}

int cmd_fit(const FitOptions& o) {
  const std::string text = read_file(o.dataset);
  DecayDataset data;
  json dataset_doc;
  int n = o.n;
  if (fs::path(o.dataset).extension() == ".csv") {
    data = dataset_from_csv(text);
    dataset_doc = dataset_to_json(data, ExperimentConfig{});
    dataset_doc.erase("config");
  } else {
    try {
      dataset_doc = json::parse(text);
      data = dataset_from_json(dataset_doc);
      if (n == 0 && dataset_doc.contains("config")) n = dataset_doc["config"].at("n").get<int>();
    } catch (const json::exception& e) {
      throw UsageError(o.dataset + ": " + e.what());
    }
  }
  if (n < 1) throw UsageError("fit: number of qubits unknown; pass -n for CSV input");
  const int d = 1 << n;

  std::pair<FitResult, FitResult> diff;
  try {
    diff = difference_estimators(data);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const auto& [b_fit, c_fit] = diff;
  Fidelities fid = estimate_fidelities(b_fit, c_fit, d);

  json out = {{"n", n},
              {"d", d},
              {"dataset", dataset_doc},
              {"difference", {{"b", to_json(b_fit)}, {"c", to_json(c_fit)}}},
              {"fidelities", {{"average", to_json(fid.average)}, {"rebit", to_json(fid.rebit)}}}};
  std::optional<FitResult> joint;
  if (data.lengths().size() >= 4) {
    auto [b_off, c_off] = difference_estimators_with_offset(data);
    out["difference_with_offset"] = {{"b", to_json(b_off)}, {"c", to_json(c_off)}};
  }
  if (data.lengths().size() >= 5) {
    joint = full_model_fit(data);
    out["full_model"] = to_json(*joint);
  }

  print_fit("b", b_fit, "r");
  print_fit("c", c_fit, "r");
  std::cout << std::setprecision(8) << "average fidelity = " << fid.average.value << " +- " << fid.average.std_error
            << "\nrebit fidelity = " << fid.rebit.value << " +- " << fid.rebit.std_error << "\n";
  if (joint) {
    print_fit("joint b", *joint, "b");
    print_fit("joint c", *joint, "c");
  }

  const std::string doc = out.dump(2) + "\n";
  if (o.out.empty()) {
    std::cout << doc;
  } else {
    write_file(o.out, doc);
  }
  return b_fit.ok() && c_fit.ok() ? kExitOk : kExitNumerical;
}

int cmd_report(const std::string& fit_file, const std::string& out_file) {
  json doc;
  try {
    doc = json::parse(read_file(fit_file));
  } catch (const json::exception& e) {
    throw UsageError(fit_file + ": " + e.what());
  }
  DecayDataset data = dataset_from_json(doc.at("dataset"));
  std::optional<FitResult> joint;
  if (doc.contains("full_model")) joint = fit_result_from_json(doc["full_model"]);
  const FitResult b_fit = fit_result_from_json(doc.at("difference").at("b"));
  const FitResult c_fit = fit_result_from_json(doc.at("difference").at("c"));

  std::ostringstream csv;
  csv << std::setprecision(17) << "curve,m,observed,stderr,model\n";
  static const char* kCurveNames[] = {"pp", "pm", "mp", "mm"};
  for (size_t k = 0; k < kLabelPairs.size(); k++) {
    const std::string name = kCurveNames[k];
    for (int m : data.lengths()) {
      const DecayRow& row = data.at(m, kLabelPairs[k].first, kLabelPairs[k].second);
      csv << name << "," << m << "," << row.mean << "," << row.std_error << ",";
      if (joint) {
        SpamCoefficients abc{joint->value("A_" + name), joint->value("B_" + name), joint->value("C_" + name)};
        csv << decay_model(abc, joint->value("b"), joint->value("c"), m);
      }
      csv << "\n";
    }
  }
  for (auto [prep, fit, name] : {std::tuple{SpamLabel::kPlus, &b_fit, "diff_plus"},
                                 std::tuple{SpamLabel::kMinus, &c_fit, "diff_minus"}}) {
    for (const auto& p : difference_curve(data, prep)) {
      csv << name << "," << p.m << "," << p.y << "," << p.sigma << ","
          << fit->value("D") * std::pow(fit->value("r"), p.m) << "\n";
    }
  }
  if (out_file.empty()) {
    std::cout << csv.str();
  } else {
    write_file(out_file, csv.str());
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Real randomized benchmarking simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  SampleOptions sample;
  auto* sample_cmd = app.add_subcommand("sample", "Draw uniform real Clifford elements as JSON lines");
  sample_cmd->add_option("-n", sample.n, "Number of qubits")->required();
  sample_cmd->add_option("-c,--count", sample.count, "Number of elements");
  sample_cmd->add_option("--seed", sample.seed, "Random seed");
  sample_cmd->add_flag("--dense", sample.dense, "Include the dense orthogonal matrix");

  int certify_n = 1;
  auto* certify_cmd = app.add_subcommand("certify", "Check the orthogonal 2-design property");
  certify_cmd->add_option("-n", certify_n, "Number of qubits (1 to 3)")->required();

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Simulate a benchmarking campaign");
  run_cmd->add_option("--config", run.config, "Experiment config (JSON or YAML)")->required();
  run_cmd->add_option("--out", run.out, "Output directory");
  run_cmd->add_option("--threads", run.threads, "Worker threads (0 = all cores)");
  run_cmd->add_option("--shots", run.shots, "Override shots (0 = exact)");
  run_cmd->add_option("--seed", run.seed, "Override seed");

  FitOptions fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit decay rates and fidelities");
  fit_cmd->add_option("dataset", fit.dataset, "dataset.json or dataset.csv")->required();
  fit_cmd->add_option("--out", fit.out, "Write the fit JSON here instead of stdout");
  fit_cmd->add_option("-n", fit.n, "Number of qubits (needed for CSV input)");

  std::string report_in, report_out;
  auto* report_cmd = app.add_subcommand("report", "Emit observed and model curves as CSV");
  report_cmd->add_option("fit", report_in, "Fit JSON from the fit command")->required();
  report_cmd->add_option("--out", report_out, "Write CSV here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*sample_cmd) return cmd_sample(sample);
    if (*certify_cmd) return cmd_certify(certify_n);
    if (*run_cmd) return cmd_run(run);
    if (*fit_cmd) return cmd_fit(fit);
    if (*report_cmd) return cmd_report(report_in, report_out);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitInvalid;
}
