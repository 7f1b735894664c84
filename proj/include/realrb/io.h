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

#ifndef REALRB_IO_H_
#define REALRB_IO_H_

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "realrb/rb_engine.h"

namespace realrb {

inline constexpr const char* kToolVersion = "0.1.0";

/// Config problem located in the source text. what() is "source:line:col: field: message".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, int line, int column, const std::string& message);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

struct LoadedConfig {
  ExperimentConfig config;
  bool seed_given = false;
};

/// Parses a JSON (or YAML) experiment config and validates it.
/// Unknown keys, wrong types and out-of-range values all raise ConfigError.
LoadedConfig parse_config(const std::string& text, const std::string& source = "<config>");
LoadedConfig load_config(const std::filesystem::path& path);

nlohmann::json to_json(const NoiseSpec& spec);
nlohmann::json to_json(const ExperimentConfig& config);

/// Header `m,prep,meas,mean,stderr,M,shots`, one row per line, fixed order.
std::string dataset_to_csv(const DecayDataset& data);
DecayDataset dataset_from_csv(const std::string& text);

/// {"config": ..., "rows": [...]}; threads are left out of the embedded config.
nlohmann::json dataset_to_json(const DecayDataset& data, const ExperimentConfig& config);
DecayDataset dataset_from_json(const nlohmann::json& j);

std::string sha256_hex(const std::string& bytes);
std::string utc_timestamp();

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& bytes);

}  // namespace realrb

#endif  // REALRB_IO_H_
