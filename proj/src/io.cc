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

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <openssl/evp.h>
#include <yaml-cpp/yaml.h>

namespace realrb {

ConfigError::ConfigError(const std::string& source, int line, int column, const std::string& message)
    : std::runtime_error(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

namespace {

class ConfigParser {
 public:
  explicit ConfigParser(std::string source) : source_(std::move(source)) {}

  LoadedConfig parse(const std::string& text) {
    YAML::Node root;
    try {
      root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
      throw ConfigError(source_, e.mark.line + 1, e.mark.column + 1, "syntax error: " + e.msg);
    }
    if (!root.IsDefined() || root.IsNull()) throw ConfigError(source_, 1, 1, "config is empty");
    root_mark_ = root.Mark();
    expect_map(root, "config");
    check_keys(root, "", {"n", "lengths", "max_length", "sequences", "shots", "seed", "threads", "noise", "spam"});

    LoadedConfig out;
    ExperimentConfig& c = out.config;
    if (!root["n"]) fail(root, "n", "required key is missing");
    c.n = static_cast<int>(get_int(root["n"], "n", 1));
    if (root["lengths"] && root["max_length"]) fail(root["max_length"], "max_length", "give either lengths or max_length");
    if (auto node = root["lengths"]) {
      remember(node, "lengths");
      if (!node.IsSequence()) fail(node, "lengths", "expected a list of integers");
      for (size_t k = 0; k < node.size(); k++) {
        c.lengths.push_back(static_cast<int>(get_int(node[k], "lengths[" + std::to_string(k) + "]", 1)));
      }
      if (c.lengths.empty()) fail(node, "lengths", "list is empty");
    }
    if (auto node = root["max_length"]) c.lengths = default_lengths(static_cast<int>(get_int(node, "max_length", 4)));
    if (auto node = root["sequences"]) c.sequences = static_cast<int>(get_int(node, "sequences", 1));
    if (auto node = root["shots"]) c.shots = static_cast<int>(get_int(node, "shots", 0));
    if (auto node = root["threads"]) c.threads = static_cast<int>(get_int(node, "threads", 0));
    if (auto node = root["seed"]) {
      c.seed = get_uint64(node, "seed");
      out.seed_given = true;
    }
    if (auto node = root["noise"]) c.noise = parse_noise(node, "noise");
    if (auto node = root["spam"]) {
      expect_map(node, "spam");
      check_keys(node, "spam", {"plus_pauli", "minus_pauli", "prep_error", "meas_error"});
      if (auto p = node["plus_pauli"]) c.spam.plus_pauli = get_string(p, "spam.plus_pauli");
      if (auto p = node["minus_pauli"]) c.spam.minus_pauli = get_string(p, "spam.minus_pauli");
      if (auto p = node["prep_error"]) c.spam.prep_error = parse_noise(p, "spam.prep_error");
      if (auto p = node["meas_error"]) c.spam.meas_error = parse_noise(p, "spam.meas_error");
    }

    try {
      validate(c);
    } catch (const std::invalid_argument& e) {
      const std::string msg = e.what();
      const std::string field = msg.substr(0, msg.find(':'));
      YAML::Mark mark = root_mark_;
      if (auto it = marks_.find(field); it != marks_.end()) mark = it->second;
      throw ConfigError(source_, mark.line + 1, mark.column + 1, msg);
    }
    return out;
  }

 private:
  [[noreturn]] void fail(const YAML::Node& node, const std::string& field, const std::string& msg) const {
    YAML::Mark m = node.Mark();
    if (m.is_null()) m = root_mark_;
    throw ConfigError(source_, m.line + 1, m.column + 1, (field.empty() ? "" : field + ": ") + msg);
  }

  void remember(const YAML::Node& node, const std::string& field) { marks_[field] = node.Mark(); }

  void expect_map(const YAML::Node& node, const std::string& field) const {
    if (!node.IsMap()) fail(node, field, "expected an object");
  }

  void check_keys(const YAML::Node& node, const std::string& prefix, const std::set<std::string>& allowed) const {
    for (const auto& kv : node) {
      const std::string key = kv.first.as<std::string>();
      if (!allowed.count(key)) fail(kv.first, prefix.empty() ? key : prefix + "." + key, "unknown key");
    }
  }

  std::string scalar(const YAML::Node& node, const std::string& field) {
    remember(node, field);
    if (!node.IsScalar()) fail(node, field, "expected a scalar value");
    return node.Scalar();
  }

  long long get_int(const YAML::Node& node, const std::string& field, long long min) {
    const std::string s = scalar(node, field);
    long long v = 0;
    size_t used = 0;
    try {
      v = std::stoll(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) fail(node, field, "expected an integer, got '" + s + "'");
    if (v < min || v > std::numeric_limits<int>::max()) {
      fail(node, field, "must be >= " + std::to_string(min) + ", got " + s);
    }
    return v;
  }

  uint64_t get_uint64(const YAML::Node& node, const std::string& field) {
    const std::string s = scalar(node, field);
    size_t used = 0;
    uint64_t v = 0;
    if (!s.empty() && s[0] != '-') {
      try {
        v = std::stoull(s, &used);
      } catch (const std::exception&) {
        used = 0;
      }
    }
    if (used == 0 || used != s.size()) fail(node, field, "expected a non-negative integer, got '" + s + "'");
    return v;
  }

  double get_double(const YAML::Node& node, const std::string& field) {
    const std::string s = scalar(node, field);
    size_t used = 0;
    double v = 0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size() || !std::isfinite(v)) fail(node, field, "expected a number, got '" + s + "'");
    return v;
  }

  std::string get_string(const YAML::Node& node, const std::string& field) { return scalar(node, field); }

  NoiseSpec parse_noise(const YAML::Node& node, const std::string& field) {
    remember(node, field);
    expect_map(node, field);
    if (!node["kind"]) fail(node, field + ".kind", "required key is missing");
    NoiseSpec spec;
    spec.kind = get_string(node["kind"], field + ".kind");
    std::set<std::string> keys = {"kind"};
    if (spec.kind == "depolarizing") {
      keys.insert("p");
    } else if (spec.kind == "dephasing" || spec.kind == "amplitude_damping") {
      keys.insert("gamma");
    } else if (spec.kind == "coherent") {
      keys.insert({"axis", "epsilon"});
    } else if (spec.kind == "composite") {
      keys.insert("parts");
    } else if (spec.kind != "identity") {
      fail(node["kind"], field + ".kind",
           "unknown kind '" + spec.kind +
               "' (identity, depolarizing, dephasing, amplitude_damping, coherent, composite)");
    }
    check_keys(node, field, keys);
    for (const auto& key : keys) {
      if (key != "kind" && !node[key]) fail(node, field + "." + key, "required key is missing");
    }
    if (spec.kind == "depolarizing") spec.param = get_double(node["p"], field + ".p");
    if (keys.count("gamma")) spec.param = get_double(node["gamma"], field + ".gamma");
    if (spec.kind == "coherent") {
      spec.param = get_double(node["epsilon"], field + ".epsilon");
      spec.axis = get_string(node["axis"], field + ".axis");
    }
    if (spec.kind == "composite") {
      const auto parts = node["parts"];
      if (!parts.IsSequence() || parts.size() == 0) fail(parts, field + ".parts", "expected a non-empty list");
      for (size_t k = 0; k < parts.size(); k++) {
        spec.parts.push_back(parse_noise(parts[k], field + ".parts[" + std::to_string(k) + "]"));
      }
    }
    return spec;
  }

  std::string source_;
  YAML::Mark root_mark_;
  std::map<std::string, YAML::Mark> marks_;
};

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

LoadedConfig parse_config(const std::string& text, const std::string& source) {
  return ConfigParser(source).parse(text);
}

LoadedConfig load_config(const std::filesystem::path& path) { return parse_config(read_file(path), path.string()); }

nlohmann::json to_json(const NoiseSpec& spec) {
  nlohmann::json j = {{"kind", spec.kind}};
  if (spec.kind == "depolarizing") j["p"] = spec.param;
  if (spec.kind == "dephasing" || spec.kind == "amplitude_damping") j["gamma"] = spec.param;
  if (spec.kind == "coherent") {
    j["axis"] = spec.axis;
    j["epsilon"] = spec.param;
  }
  if (spec.kind == "composite") {
    j["parts"] = nlohmann::json::array();
    for (const auto& p : spec.parts) j["parts"].push_back(to_json(p));
  }
  return j;
}

nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json spam = {{"plus_pauli", c.spam.plus_pauli}, {"minus_pauli", c.spam.minus_pauli}};
  if (c.spam.prep_error) spam["prep_error"] = to_json(*c.spam.prep_error);
  if (c.spam.meas_error) spam["meas_error"] = to_json(*c.spam.meas_error);
  return {{"n", c.n},           {"lengths", c.lengths},   {"sequences", c.sequences}, {"shots", c.shots},
          {"seed", c.seed},     {"threads", c.threads},   {"noise", to_json(c.noise)}, {"spam", spam}};
}

std::string dataset_to_csv(const DecayDataset& data) {
  std::string out = "m,prep,meas,mean,stderr,M,shots\n";
  for (const auto& r : data.rows) {
    out += std::to_string(r.m) + "," + to_string(r.prep) + "," + to_string(r.meas) + "," + format_double(r.mean) +
           "," + format_double(r.std_error) + "," + std::to_string(r.sequences) + "," + std::to_string(r.shots) + "\n";
  }
  return out;
}

DecayDataset dataset_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "m,prep,meas,mean,stderr,M,shots") {
    throw std::invalid_argument("dataset CSV: line 1: expected header m,prep,meas,mean,stderr,M,shots");
  }
  DecayDataset data;
  int lineno = 1;
  while (std::getline(in, line)) {
    lineno++;
    if (line.empty()) continue;
    auto cells = split(line, ',');
    try {
      if (cells.size() != 7) throw std::invalid_argument("expected 7 fields");
      data.rows.push_back({std::stoi(cells[0]), spam_label_from_string(cells[1]), spam_label_from_string(cells[2]),
                           std::stod(cells[3]), std::stod(cells[4]), std::stoi(cells[5]), std::stoi(cells[6])});
    } catch (const std::exception& e) {
      throw std::invalid_argument("dataset CSV: line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return data;
}

nlohmann::json dataset_to_json(const DecayDataset& data, const ExperimentConfig& config) {
  nlohmann::json cfg = to_json(config);
  cfg.erase("threads");
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : data.rows) {
    rows.push_back({{"m", r.m},
                    {"prep", to_string(r.prep)},
                    {"meas", to_string(r.meas)},
                    {"mean", r.mean},
                    {"stderr", r.std_error},
                    {"M", r.sequences},
                    {"shots", r.shots}});
  }
  return {{"config", cfg}, {"rows", rows}};
}

DecayDataset dataset_from_json(const nlohmann::json& j) {
  DecayDataset data;
  for (const auto& r : j.at("rows")) {
    data.rows.push_back({r.at("m").get<int>(), spam_label_from_string(r.at("prep").get<std::string>()),
                         spam_label_from_string(r.at("meas").get<std::string>()), r.at("mean").get<double>(),
                         r.at("stderr").get<double>(), r.at("M").get<int>(), r.at("shots").get<int>()});
  }
  return data;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int k = 0; k < len; k++) {
    out += hex[digest[k] >> 4];
    out += hex[digest[k] & 15];
  }
  return out;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << bytes;
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

}  // namespace realrb
