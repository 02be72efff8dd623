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
#include <optional>
#include <string>
#include <vector>

#include "spinq/bench/rb.hpp"
#include "spinq/runner/config.hpp"

namespace spinq {

struct OutputFile {
  std::string name;
  std::string sha256;
  std::size_t bytes = 0;
};

struct RunManifest {
  std::string experiment;
  std::uint64_t seed = 0;
  std::string version;
  double wall_time_s = 0.0;
  std::string config;  // resolved config text
  std::string out_dir;
  std::vector<OutputFile> files;
};

struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
};

/// Output directory when neither the command line nor the config names one:
/// $SPINQ_OUT_DIR, else "spinq_out".
std::string default_out_dir();

/// RB settings of an rb or irb config.
RBConfig rb_config_from(const ExperimentConfig& c);

/// In-memory result of an experiment: file name -> content.
struct ExperimentOutput {
  std::vector<std::pair<std::string, std::string>> files;
};

/// Runs the experiment without touching the file system. Throws SpinqError
/// on runtime failure.
ExperimentOutput execute(const ExperimentConfig& c);

/// Runs the experiment, writes its data files and finally manifest.json.
RunManifest run_experiment(ExperimentConfig c, const RunOptions& opts = {});

}  // namespace spinq
