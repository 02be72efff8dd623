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

#include <vector>

#include <Eigen/Dense>

#include "spinq/compiler/compile.hpp"
#include "spinq/device/experiments.hpp"

namespace spinq {

/// Hadamard up to global phase: Z(pi) then Y90.
Circuit hadamard(int qubit);

/// H(target), CZ, H(target).
Circuit synthesize_cnot(int control, int target);

/// CNOT(1->2), CNOT(2->1), CNOT(1->2).
Circuit synthesize_swap();

/// Rows: prepared basis state (dd, du, ud, uu); columns: measured outcome.
/// Basis states are prepared with X90 pairs. `mode.noisy` switches the
/// dynamical noise; SPAM follows the parameters.
Eigen::Matrix4d truth_table(const Circuit& c, const DeviceParams& p, const CZCalibration& cal,
                            const SimulationMode& mode);

/// Joint probabilities after a resonant drive of `drive_qubit` for each tau
/// followed by `c`.
std::vector<ProbabilityVector> drive_then_circuit(const Circuit& c, int drive_qubit, const std::vector<double>& taus,
                                                  const DeviceParams& p, const CZCalibration& cal,
                                                  const SimulationMode& mode);

}  // namespace spinq
