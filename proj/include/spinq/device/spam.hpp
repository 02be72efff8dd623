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

#include <array>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "spinq/core/quantum.hpp"
#include "spinq/device/params.hpp"

namespace spinq {

using Matrix4d = Eigen::Matrix4d;

/// Joint outcome counts in the order dd, du, ud, uu.
struct MeasurementCounts {
  std::array<std::int64_t, 4> n{};
  std::int64_t shots = 0;

  std::int64_t operator[](int i) const { return n[static_cast<std::size_t>(i)]; }
  ProbabilityVector frequencies() const;
};

/// Readout part only: (C_meas,1 x C_meas,2). Column = true state.
Matrix4d readout_confusion(const DeviceParams& p);

/// Initialization part only: (C_init,1 x C_init,2), a symmetric flip with
/// probability 1 - rho0_i on each qubit.
Matrix4d init_confusion(const DeviceParams& p);

/// Full SPAM map C = C_meas * C_init; column-stochastic.
Matrix4d confusion_matrix(const DeviceParams& p);

/// Prepared state after an imperfect initialization to |dd>.
DensityMatrix initial_state(const DeviceParams& p);

/// Probabilities of the observed outcomes: C_meas * diag(rho).
ProbabilityVector outcome_probabilities(const DeviceParams& p, const DensityMatrix& rho);

/// Multinomial draw with the given probabilities.
MeasurementCounts sample_counts(const ProbabilityVector& probs, std::int64_t shots, std::mt19937_64& rng);

/// Multinomial draw from C_meas * diag(rho). Initialization errors are not
/// applied here; they enter through initial_state.
MeasurementCounts measure_with_spam(const DeviceParams& p, const DensityMatrix& rho, std::int64_t shots,
                                    std::mt19937_64& rng);

/// P(qubit reads up) from joint outcome probabilities.
double marginal_up(const ProbabilityVector& probs, int qubit);

}  // namespace spinq
