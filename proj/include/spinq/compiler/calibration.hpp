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

#include "spinq/compiler/compile.hpp"
#include "spinq/device/evolve.hpp"

namespace spinq {

struct CZCalibrationOptions {
  /// Edge ramp in seconds; negative means DeviceParams::cz_ramp.
  double ramp = -1.0;
  int coarse_points = 64;
  double phase_tolerance = 1e-3;
  EvolveOptions evolve{false, 1.0, 0.0};
};

/// arg(U33 U00 / (U11 U22)) in (-pi, pi].
double conditional_phase(const Mat& u);

/// Raw propagator of the exchange pulse, before virtual-Z corrections.
Mat cz_pulse_unitary(const DeviceParams& p, const CZCalibration& cal, const EvolveOptions& opts = {false, 1.0, 0.0});

/// Calibrates duration and virtual-Z corrections of a CZ at `j_peak`.
/// Throws when no duration up to 10x the nominal one reaches a pi phase.
CZCalibration calibrate_cz(const DeviceParams& p, double j_peak, const CZCalibrationOptions& opts = {});

struct PhaseScanPoint {
  double phase = 0.0;
  double p_up_control_down = 0.0;
  double p_up_control_up = 0.0;
};

/// Noiseless Ramsey of `target` around the raw CZ pulse against the phase of
/// the closing X90, with the control prepared down and up.
std::vector<PhaseScanPoint> cz_phase_scan(const DeviceParams& p, const CZCalibration& cal,
                                          const std::vector<double>& phases, int target = 1);

}  // namespace spinq
