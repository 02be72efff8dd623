// Copyright 2026 The spinq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spinq/device/params.hpp"

namespace spinq {

enum class ValueType { Real, Integer, Boolean, Choice, IntList, Text };

/// One accepted key. An empty default marks an optional key that stays unset.
struct KeySpec {
  std::string section;  // "" for the top level
  std::string key;
  ValueType type = ValueType::Real;
  std::string default_text;
  std::vector<std::string> choices;
  std::optional<double> min_value;
  std::string help;
};

/// Every key of every section, in echo order.
const std::vector<KeySpec>& config_schema();

/// Experiments and the sections each one accepts besides the top level.
const std::vector<std::string>& experiment_names();
std::vector<std::string> sections_for(const std::string& experiment);

struct ConfigValue {
  ValueType type = ValueType::Real;
  bool set = false;
  double real = 0.0;
  std::int64_t integer = 0;
  bool flag = false;
  std::string text;  // canonical text form
  std::vector<int> ints;
  int line = 0;      // 0 when the default was used
};

struct ExperimentConfig {
  std::string experiment;
  std::uint64_t seed = 0;
  std::string out_dir;
  DeviceParams device;
  /// Resolved values of every applicable key, keyed "section.key".
  std::map<std::string, ConfigValue> values;

  const ConfigValue& at(const std::string& section, const std::string& key) const;
  double real(const std::string& section, const std::string& key) const;
  std::optional<double> optional_real(const std::string& section, const std::string& key) const;
  std::int64_t integer(const std::string& section, const std::string& key) const;
  bool flag(const std::string& section, const std::string& key) const;
  const std::string& text(const std::string& section, const std::string& key) const;
  const std::vector<int>& ints(const std::string& section, const std::string& key) const;
};

struct Diagnostic {
  int line = 0;  // 0 when not tied to a line
  std::string field;
  std::string message;
};

std::string to_string(const Diagnostic& d);

struct ParseResult {
  std::optional<ExperimentConfig> config;
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return config.has_value() && diagnostics.empty(); }
};

/// Parses and fully validates a config. Never throws on bad input.
ParseResult parse_config(std::string_view text);

/// Canonical listing of the resolved config, defaults included.
std::string resolved_text(const ExperimentConfig& c);

}  // namespace spinq
