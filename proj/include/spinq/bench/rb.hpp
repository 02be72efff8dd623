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
#include <random>
#include <vector>

#include "spinq/bench/fit.hpp"
#include "spinq/clifford/group.hpp"
#include "spinq/compiler/circuit.hpp"
#include "spinq/compiler/compile.hpp"
#include "spinq/device/params.hpp"

namespace spinq {

struct RBConfig {
  std::vector<int> lengths{1, 2, 4, 8, 16, 32, 65};
  int sequences_per_length = 125;
  /// 0 gives exact probabilities instead of sampled shots.
  std::int64_t shots_per_sequence = 160;
  /// Gate interleaved after every random Clifford (a CZ or a synthesized CNOT).
  std::optional<Circuit> interleave;
  std::uint64_t seed = 0;
  int bootstrap_resamples = 1000;
  double confidence_level = 0.95;
  /// Test mode: noiseless dynamics with a uniform depolarizing channel of this
  /// strength after every compiled Clifford block. Interleaved gates stay ideal.
  std::optional<double> injected_depolarizing;
  /// Quasi-static noise draws per sequence when noisy; 0 draws one per shot.
  int noise_realizations = 0;
  /// Plateau exchange of the calibrated CZ, Hz.
  double j_cz = 5e6;
  CompileOptions compile;
  DecayFitOptions fit;

  /// Throws SpinqError naming the first problem.
  void validate() const;
};

/// m random Cliffords, each followed by `interleave` when given, then the
/// recovery Clifford that returns the ideal net operation to the identity.
Circuit build_rb_sequence(int m, const CliffordTable& table, std::mt19937_64& rng,
                          const std::optional<Circuit>& interleave = std::nullopt);

/// Same sequence as separate blocks: one circuit per Clifford or interleaved
/// gate, recovery last.
std::vector<Circuit> build_rb_blocks(int m, const CliffordTable& table, std::mt19937_64& rng,
                                     const std::optional<Circuit>& interleave = std::nullopt);

struct RBCurve {
  RBData data;
  std::vector<double> means;
  std::vector<double> stderrs;
  std::vector<int> counts;
  DecayFit fit;
};

struct RBResult {
  RBCurve reference;
  std::optional<RBCurve> interleaved;
  /// Average Clifford fidelity and error rate from the reference decay.
  FidelityEstimate clifford;
  std::optional<FidelityEstimate> gate;
  ConfidenceInterval clifford_ci;
  std::optional<ConfidenceInterval> gate_ci;
  /// A percentile interval missed its point estimate and was extended to it.
  bool ci_extended = false;
  CZCalibration cz;
};

/// Runs reference (and, with an interleaved gate, interleaved) RB. `noisy`
/// switches on quasi-static and Markovian dephasing and the SPAM of `params`;
/// otherwise the device is ideal apart from its coherent pulse errors.
RBResult run_rb(const RBConfig& config, const DeviceParams& params, bool noisy);

}  // namespace spinq
