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

// Drives the realrb binary through the shell.

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <sstream>

#include "gtest/gtest.h"
#include "realrb/f2.h"
#include "realrb/fitting.h"
#include "realrb/io.h"

namespace fs = std::filesystem;
using namespace realrb;

namespace {

struct Result {
  int code;
  std::string out;
};

Result run(const std::string& args) {
  const std::string cmd = std::string(REALRB_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("realrb_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

const std::string kExampleConfig = std::string(REALRB_SOURCE_DIR) + "/configs/example_depolarizing.json";

}  // namespace

TEST(cli, sample_lines_are_members) {
  auto r = run("sample -n 1 -c 4 --seed 7");
  ASSERT_EQ(r.code, 0);
  auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 4u);
  for (const auto& l : ls) {
    auto j = nlohmann::json::parse(l);
    EXPECT_TRUE(j["member"].get<bool>());
    std::vector<std::vector<int>> rows;
    for (const auto& s : j["symplectic"]) {
      std::vector<int> row;
      for (char ch : s.get<std::string>()) row.push_back(ch - '0');
      rows.push_back(row);
    }
    EXPECT_TRUE(is_in_oplus(BinaryMatrix2n::from_rows(rows)));
  }
  EXPECT_EQ(run("sample -n 1 -c 4 --seed 7").out, r.out);
  EXPECT_NE(run("sample -n 1 -c 4 --seed 8").out, r.out);
}

TEST(cli, sample_dense_and_errors) {
  auto r = run("sample -n 2 -c 1 --seed 1 --dense");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(nlohmann::json::parse(r.out)["dense"].size(), 4u);
  EXPECT_EQ(run("sample -n 0 -c 1").code, 1);
  EXPECT_EQ(run("sample -n 40 -c 1").code, 1);
  EXPECT_EQ(run("sample").code, 1);
}

TEST(cli, certify) {
  auto r = run("certify -n 1");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("P = 3.000000"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("P = 4.000000, not certified"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("commutant dim = 3, certified"), std::string::npos) << r.out;
  EXPECT_EQ(run("certify -n 4").code, 1);
}

TEST(cli, run_fit_report_pipeline) {
  auto dir = scratch("pipeline");
  auto r = run("run --config " + kExampleConfig + " --out " + dir.string());
  ASSERT_EQ(r.code, 0);
  for (const char* f : {"dataset.csv", "dataset.json", "config.json", "manifest.json"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
  auto manifest = nlohmann::json::parse(read_file(dir / "manifest.json"));
  EXPECT_EQ(manifest["outputs"]["dataset.csv"].get<std::string>(), sha256_hex(read_file(dir / "dataset.csv")));
  EXPECT_EQ(manifest["seed"].get<uint64_t>(), 20260101u);
  EXPECT_EQ(manifest["version"].get<std::string>(), kToolVersion);

  const auto fit_path = (dir / "fit.json").string();
  r = run("fit " + (dir / "dataset.json").string() + " --out " + fit_path);
  ASSERT_EQ(r.code, 0) << r.out;
  auto fit = nlohmann::json::parse(read_file(fit_path));
  auto b = fit_result_from_json(fit["difference"]["b"]);
  EXPECT_NEAR(b.value("r"), 0.99, 1e-3);
  EXPECT_NEAR(fit["fidelities"]["average"]["value"].get<double>(), 0.995, 1e-3);

  r = run("report " + fit_path);
  ASSERT_EQ(r.code, 0);
  auto ls = lines(r.out);
  // Header, 7 lengths x 4 raw curves, then 7 x 2 difference-curve rows.
  EXPECT_EQ(ls.size(), 1u + 7 * 4 + 7 * 2);
  EXPECT_EQ(ls[0], "curve,m,observed,stderr,model");
}

TEST(cli, run_is_byte_identical) {
  auto a = scratch("det_a"), b = scratch("det_b");
  ASSERT_EQ(run("run --config " + kExampleConfig + " --out " + a.string() + " --shots 200").code, 0);
  ASSERT_EQ(run("run --config " + kExampleConfig + " --out " + b.string() + " --shots 200 --threads 3").code, 0);
  for (const char* f : {"dataset.csv", "dataset.json", "config.json"}) {
    EXPECT_EQ(read_file(a / f), read_file(b / f)) << f;
  }
}

TEST(cli, shots_variant_within_three_sigma) {
  auto dir = scratch("shots");
  ASSERT_EQ(run("run --config " + kExampleConfig + " --out " + dir.string() + " --shots 1000").code, 0);
  auto r = run("fit " + (dir / "dataset.json").string() + " --out " + (dir / "fit.json").string());
  ASSERT_EQ(r.code, 0);
  auto fit = nlohmann::json::parse(read_file(dir / "fit.json"));
  auto b = fit_result_from_json(fit["difference"]["b"]);
  EXPECT_NEAR(b.value("r"), 0.99, 3 * b.std_error("r"));
}

TEST(cli, fit_csv_needs_qubit_count) {
  auto dir = scratch("csv");
  ASSERT_EQ(run("run --config " + kExampleConfig + " --out " + dir.string()).code, 0);
  EXPECT_EQ(run("fit " + (dir / "dataset.csv").string()).code, 1);
  EXPECT_EQ(run("fit -n 1 " + (dir / "dataset.csv").string()).code, 0);
}

TEST(cli, validation_errors_exit_one) {
  auto dir = scratch("bad");
  write_file(dir / "bad.json", "{\n  \"n\": 1,\n  \"sequences\": -3\n}\n");
  auto r = run("run --config " + (dir / "bad.json").string() + " --out " + (dir / "o").string() + " 2>&1");
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(run("run --config " + (dir / "missing.json").string()).code, 1);
  EXPECT_EQ(run("fit " + (dir / "missing.json").string()).code, 1);
  EXPECT_EQ(run("bogus").code, 1);
}

TEST(cli, flagged_fit_exits_two) {
  auto dir = scratch("flat");
  write_file(dir / "flat.json", R"({"n": 1, "lengths": [4, 8, 16, 32, 64], "sequences": 5, "seed": 1})");
  ASSERT_EQ(run("run --config " + (dir / "flat.json").string() + " --out " + dir.string()).code, 0);
  EXPECT_EQ(run("fit " + (dir / "dataset.json").string()).code, 2);
}

TEST(cli, threads_env_fallback) {
  auto dir = scratch("env");
  const std::string cmd = "env REALRB_THREADS=nope " + std::string(REALRB_CLI) + " run --config " + kExampleConfig +
                          " --out " + dir.string() + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  EXPECT_EQ(WEXITSTATUS(status), 1);
}
