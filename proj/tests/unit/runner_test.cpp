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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

#include "json.hpp"

#include "spinq/runner/runner.hpp"
#include "spinq/util/io.hpp"

using namespace spinq;
namespace fs = std::filesystem;

namespace {

// Small enough to run in well under a second.
const char* kBellConfig =
    "experiment = belltomo\n"
    "seed = 11\n"
    "[simulation]\n"
    "shots = 200\n"
    "noise_realizations = 4\n"
    "[belltomo]\n"
    "variant = phi-\n";

ExperimentConfig parse_ok(const std::string& text) {
  auto r = parse_config(text);
  EXPECT_TRUE(r.ok()) << (r.diagnostics.empty() ? "" : to_string(r.diagnostics.front()));
  return *r.config;
}

bool mentions(const ParseResult& r, const std::string& what) {
  for (const auto& d : r.diagnostics) {
    if (to_string(d).find(what) != std::string::npos) return true;
  }
  return false;
}

fs::path scratch_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("spinq_runner_test_" + name);
  fs::remove_all(d);
  return d;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(SPINQ_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Config, EmptyFileNamesMissingExperiment) {
  const auto r = parse_config("");
  EXPECT_FALSE(r.ok());
  EXPECT_TRUE(mentions(r, "experiment"));
}

TEST(Config, CoherenceOrderingViolationNamesField) {
  const auto r = parse_config("experiment = coherence\n[device]\nT2star1 = 3e-5\n");
  EXPECT_FALSE(r.ok());
  EXPECT_TRUE(mentions(r, "T2star1"));
}

TEST(Config, UnknownAndDuplicateKeysCarryLineNumbers) {
  const auto r = parse_config("experiment = rabi\n[rabi]\nbogus = 1\nf_points = 3\nf_points = 4\n");
  EXPECT_FALSE(r.ok());
  EXPECT_TRUE(mentions(r, "line 3: rabi.bogus: unknown key"));
  EXPECT_TRUE(mentions(r, "line 5: rabi.f_points: key given twice"));
}

TEST(Config, BadValuesAndForeignSectionsAreReported) {
  EXPECT_TRUE(mentions(parse_config("experiment = rabi\n[simulation]\nshots = many\n"), "simulation.shots"));
  EXPECT_TRUE(mentions(parse_config("experiment = rabi\n[rb]\nsequences = 3\n"), "does not apply"));
  EXPECT_TRUE(mentions(parse_config("experiment = teleport\n"), "expected one of"));
  EXPECT_TRUE(mentions(parse_config("experiment = rb\n[rb]\nlengths = 1,5,3\n"), "ascending"));
}

TEST(Config, ResolvedTextEchoesDefaults) {
  const auto c = parse_ok("experiment = rabi\n");
  const std::string echo = resolved_text(c);
  EXPECT_NE(echo.find("f1 = 18.247e9"), std::string::npos) << echo;
  EXPECT_NE(echo.find("[rabi]"), std::string::npos);
  EXPECT_EQ(echo.find("[rb]"), std::string::npos);
  // The echo parses back to the same resolved config.
  const auto again = parse_ok(echo);
  EXPECT_EQ(resolved_text(again), echo);
}

TEST(Runner, SameSeedGivesIdenticalBytes) {
  const auto c = parse_ok(kBellConfig);
  const auto a = execute(c);
  const auto b = execute(c);
  ASSERT_EQ(a.files.size(), b.files.size());
  for (std::size_t i = 0; i < a.files.size(); ++i) {
    EXPECT_EQ(a.files[i].first, b.files[i].first);
    EXPECT_EQ(a.files[i].second, b.files[i].second);
  }
  auto other = c;
  other.seed = 12;
  EXPECT_NE(execute(other).files.front().second, a.files.front().second);
}

TEST(Runner, ManifestChecksumsMatchFiles) {
  const fs::path dir = scratch_dir("manifest");
  const auto m = run_experiment(parse_ok(kBellConfig), {std::nullopt, dir.string()});
  ASSERT_EQ(m.files.size(), 2u);
  const std::string manifest = read_file((dir / "manifest.json").string());
  for (const auto& f : m.files) {
    const std::string content = read_file((dir / f.name).string());
    EXPECT_EQ(sha256_hex(content), f.sha256);
    EXPECT_EQ(content.size(), f.bytes);
    EXPECT_NE(manifest.find(f.sha256), std::string::npos);
  }
  EXPECT_NE(manifest.find("\"seed\": 11"), std::string::npos);
  fs::remove_all(dir);
}

TEST(Runner, SeedOverrideIsRecorded) {
  const fs::path dir = scratch_dir("seed");
  const auto m = run_experiment(parse_ok(kBellConfig), {7, dir.string()});
  EXPECT_EQ(m.seed, 7u);
  EXPECT_NE(m.config.find("seed = 7"), std::string::npos);
  fs::remove_all(dir);
}

TEST(Runner, NoiselessBellTomographyIsPerfect) {
  const auto c = parse_ok("experiment = belltomo\n[simulation]\nnoisy = false\nshots = 0\n[belltomo]\nvariant = phi-\n");
  const auto out = execute(c);
  const auto j = nlohmann::json::parse(out.files.back().second);
  ASSERT_EQ(j["states"].size(), 1u);
  EXPECT_EQ(j["states"][0]["variant"], "phi-");
  EXPECT_NEAR(j["states"][0]["F_u"].get<double>(), 1.0, 1e-6);
}

TEST(Cli, ExitCodes) {
  const fs::path dir = scratch_dir("cli");
  fs::create_directories(dir);
  const fs::path good = dir / "good.cfg";
  const fs::path bad = dir / "bad.cfg";
  std::ofstream(good) << kBellConfig;
  std::ofstream(bad) << "experiment = belltomo\n[belltomo]\nvariant = omega\n";
  const fs::path blocker = dir / "file";
  std::ofstream(blocker) << "x";

  EXPECT_EQ(run_cli("validate " + good.string()), 0);
  EXPECT_EQ(run_cli("run " + good.string() + " --out-dir " + (dir / "out").string()), 0);
  EXPECT_TRUE(fs::exists(dir / "out" / "manifest.json"));
  EXPECT_EQ(run_cli("validate " + bad.string()), 2);
  EXPECT_EQ(run_cli("run " + (dir / "missing.cfg").string()), 2);
  EXPECT_EQ(run_cli("frobnicate"), 2);
  EXPECT_EQ(run_cli("run " + good.string() + " --out-dir " + (blocker / "sub").string()), 1);
  fs::remove_all(dir);
}
