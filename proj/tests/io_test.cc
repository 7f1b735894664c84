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

#include "realrb/io.h"

#include "gtest/gtest.h"

using namespace realrb;

namespace {

const char* kFull = R"({
  "n": 2,
  "lengths": [1, 4, 16],
  "sequences": 10,
  "shots": 100,
  "seed": 18446744073709551615,
  "threads": 2,
  "noise": {"kind": "composite", "parts": [
    {"kind": "depolarizing", "p": 0.99},
    {"kind": "coherent", "axis": "Y", "epsilon": 0.05}
  ]},
  "spam": {
    "plus_pauli": "ZZ",
    "minus_pauli": "YI",
    "prep_error": {"kind": "amplitude_damping", "gamma": 0.02},
    "meas_error": {"kind": "dephasing", "gamma": 0.01}
  }
})";

int error_line(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST(config, parses_every_field) {
  auto loaded = parse_config(kFull);
  const auto& c = loaded.config;
  EXPECT_TRUE(loaded.seed_given);
  EXPECT_EQ(c.n, 2);
  EXPECT_EQ(c.lengths, (std::vector<int>{1, 4, 16}));
  EXPECT_EQ(c.sequences, 10);
  EXPECT_EQ(c.shots, 100);
  EXPECT_EQ(c.seed, 18446744073709551615ULL);
  EXPECT_EQ(c.threads, 2);
  ASSERT_EQ(c.noise.parts.size(), 2u);
  EXPECT_EQ(c.noise.parts[1].axis, "Y");
  EXPECT_DOUBLE_EQ(c.noise.parts[1].param, 0.05);
  EXPECT_EQ(c.spam.plus_pauli, "ZZ");
  ASSERT_TRUE(c.spam.prep_error.has_value());
  EXPECT_DOUBLE_EQ(c.spam.prep_error->param, 0.02);
}

TEST(config, defaults) {
  auto loaded = parse_config(R"({"n": 1})");
  EXPECT_FALSE(loaded.seed_given);
  EXPECT_EQ(loaded.config.lengths, default_lengths());
  EXPECT_EQ(loaded.config.sequences, 50);
  EXPECT_EQ(loaded.config.noise.kind, "identity");
  EXPECT_EQ(parse_config(R"({"n": 1, "max_length": 32})").config.lengths, (std::vector<int>{4, 8, 16, 32}));
}

TEST(config, yaml_is_accepted) {
  auto c = parse_config("n: 1\nlengths: [2, 4]\nnoise:\n  kind: depolarizing\n  p: 0.9\n").config;
  EXPECT_EQ(c.lengths, (std::vector<int>{2, 4}));
  EXPECT_DOUBLE_EQ(c.noise.param, 0.9);
}

TEST(config, round_trip) {
  auto first = parse_config(kFull).config;
  auto second = parse_config(to_json(first).dump()).config;
  EXPECT_EQ(first, second);
  auto third = parse_config(to_json(second).dump(2)).config;
  EXPECT_EQ(second, third);
}

TEST(config, line_precise_errors) {
  EXPECT_EQ(error_line("{\n  \"n\": 1,\n  \"bogus\": 3\n}"), 3);
  EXPECT_EQ(error_line("{\n  \"n\": \"two\"\n}"), 2);
  EXPECT_EQ(error_line("{\n  \"n\": 1,\n  \"noise\": {\n    \"kind\": \"depolarizing\",\n    \"p\": \"x\"\n  }\n}"), 5);
  EXPECT_EQ(error_line("{\n  \"n\": 1,\n  \"noise\": {\"kind\": \"warp\"}\n}"), 3);
  // Range errors found by validation point at the offending key.
  EXPECT_EQ(error_line("{\n  \"n\": 1,\n  \"lengths\": [4, 8],\n  \"spam\": {\n    \"plus_pauli\": \"Y\"\n  }\n}"), 5);
  EXPECT_EQ(error_line("{\n  \"n\": 9\n}"), 2);
  // Syntax errors.
  EXPECT_EQ(error_line("{\n  \"n\": 1,\n  \"lengths\": [4, 8\n}"), 4);
  EXPECT_EQ(error_line("{\"lengths\": [4]}"), 1);
}

TEST(config, error_message_names_field) {
  try {
    parse_config("{\n  \"n\": 1,\n  \"noise\": {\"kind\": \"depolarizing\"}\n}", "cfg.json");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("cfg.json:3:"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("noise.p"), std::string::npos) << e.what();
  }
}

TEST(dataset, csv_round_trip) {
  DecayDataset d;
  d.rows.push_back({4, SpamLabel::kPlus, SpamLabel::kMinus, 0.1234567890123456789, 1e-17, 50, 0});
  d.rows.push_back({8, SpamLabel::kMinus, SpamLabel::kPlus, 1.0 / 3, 0.25, 50, 1000});
  const std::string csv = dataset_to_csv(d);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "m,prep,meas,mean,stderr,M,shots");
  auto back = dataset_from_csv(csv);
  ASSERT_EQ(back.rows.size(), 2u);
  EXPECT_EQ(back.rows[0].mean, d.rows[0].mean);
  EXPECT_EQ(back.rows[1].std_error, 0.25);
  EXPECT_EQ(back.rows[1].prep, SpamLabel::kMinus);
  EXPECT_EQ(dataset_to_csv(back), csv);
  EXPECT_THROW(dataset_from_csv("m,prep\n"), std::invalid_argument);
  EXPECT_THROW(dataset_from_csv("m,prep,meas,mean,stderr,M,shots\n4,plus,up,0.1,0,1,0\n"), std::invalid_argument);
}

TEST(dataset, json_round_trip) {
  DecayDataset d;
  d.rows.push_back({4, SpamLabel::kPlus, SpamLabel::kPlus, 0.75, 0.01, 50, 0});
  ExperimentConfig c;
  c.threads = 4;
  auto j = dataset_to_json(d, c);
  EXPECT_FALSE(j["config"].contains("threads"));
  auto back = dataset_from_json(j);
  EXPECT_EQ(back.rows[0].mean, 0.75);
}

TEST(digest, sha256_known_vector) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
