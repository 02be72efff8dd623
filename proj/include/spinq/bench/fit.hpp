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
#include <functional>
#include <vector>

namespace spinq {

/// Fit of P(m) = A p^m + B.
struct DecayFit {
  double A = 0.0;
  double B = 0.0;
  double p = 0.0;
  double residual_norm = 0.0;
  std::vector<int> lengths;
  std::vector<double> means;
  /// B was pinned to 1/d because the data did not resolve a decay.
  bool offset_fixed = false;
  /// False when A is ~0 and p therefore carries no information.
  bool identifiable = true;
  int iterations = 0;
};

struct DecayFitOptions {
  int dimension = 4;
  /// Below this spread of the means the offset is pinned to 1/d.
  double min_spread = 0.02;
  int max_iterations = 10000;
};

/// Equal-weight least squares with p in [0, 1]. Throws on fewer than three
/// lengths or when the refinement does not converge.
DecayFit fit_decay(const std::vector<int>& lengths, const std::vector<double>& means, const DecayFitOptions& opts = {});

/// Per-length raw data: per_sequence[i] holds one value per sequence of lengths[i].
struct RBData {
  std::vector<int> lengths;
  std::vector<std::vector<double>> per_sequence;

  std::vector<double> means() const;
  std::vector<double> stderrs() const;
};

DecayFit fit_decay(const RBData& data, const DecayFitOptions& opts = {});

struct FidelityEstimate {
  double F = 0.0;
  double r = 0.0;
  /// Interleaved only: p_int exceeded p_ref and F was capped at 1.
  bool capped = false;
};

/// Reference: r = (d-1)(1-p)/d, F = 1 - r.
FidelityEstimate rb_fidelity(double p, int d);
/// Interleaved: F = 1 - (d-1)(1 - p_int/p_ref)/d.
FidelityEstimate interleaved_fidelity(double p_int, double p_ref, int d);

struct ConfidenceInterval {
  double level = 0.95;
  double lo = 0.0;
  double hi = 0.0;
};

/// Percentile bootstrap: each resample redraws sequences with replacement
/// within every length of every data set, refits, and evaluates `statistic`
/// on the fits. Throws when more than 10% of refits fail.
ConfidenceInterval bootstrap_ci(const std::vector<RBData>& sets,
                                const std::function<double(const std::vector<DecayFit>&)>& statistic,
                                int resamples, double level, std::uint64_t seed, const DecayFitOptions& opts = {});

/// Bootstrap CI of the decay parameter p of a single data set.
ConfidenceInterval bootstrap_ci(const RBData& data, int resamples = 1000, double level = 0.95,
                                std::uint64_t seed = 0, const DecayFitOptions& opts = {});

}  // namespace spinq
