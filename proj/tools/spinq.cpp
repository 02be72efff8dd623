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

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "spinq/runner/runner.hpp"
#include "spinq/util/io.hpp"
#include "spinq/util/parallel.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kRuntimeError = 1;
constexpr int kConfigError = 2;

std::optional<spinq::ExperimentConfig> load(const std::string& path) {
  std::string text;
  try {
    text = spinq::read_file(path);
  } catch (const spinq::SpinqError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return std::nullopt;
  }
  auto parsed = spinq::parse_config(text);
  for (const auto& d : parsed.diagnostics) std::cerr << path << ": " << spinq::to_string(d) << "\n";
  if (!parsed.ok()) return std::nullopt;
  return parsed.config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-spin processor simulator and characterization runner"};
  app.require_subcommand(1);
  app.fallthrough();
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  unsigned threads = 0;
  app.add_option("--seed", seed, "override the config seed");
  app.add_option("--out-dir", out_dir, "output directory (default: config out_dir, $SPINQ_OUT_DIR, spinq_out)");
  app.add_option("--threads", threads, "worker threads (0 = all cores)");

  std::string run_path;
  auto* run = app.add_subcommand("run", "run the experiment of a config file");
  run->add_option("config", run_path, "config file")->required();
  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "check a config and print it with defaults filled in");
  validate->add_option("config", validate_path, "config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }
  spinq::max_threads().store(threads);

  if (*validate) {
    const auto cfg = load(validate_path);
    if (!cfg) return kConfigError;
    std::cout << spinq::resolved_text(*cfg);
    return kOk;
  }

  const auto cfg = load(run_path);
  if (!cfg) return kConfigError;
  try {
    const auto m = spinq::run_experiment(*cfg, {seed, out_dir});
    for (const auto& f : m.files) std::cout << m.out_dir << "/" << f.name << "  " << f.sha256 << "\n";
    std::cout << m.out_dir << "/manifest.json\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
  return kOk;
}
