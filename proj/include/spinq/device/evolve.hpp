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
#include <random>

#include "spinq/core/quantum.hpp"
#include "spinq/device/params.hpp"
#include "spinq/device/schedule.hpp"

namespace spinq {

/// Quasi-static qubit frequency offsets, held constant within a shot.
struct NoiseRealization {
  double delta_f1 = 0.0;
  double delta_f2 = 0.0;
};

/// Standard deviation of the quasi-static offset for a Gaussian Ramsey
/// envelope exp(-(t / T2*)^2): 1 / (sqrt(2) pi T2*). Zero for infinite T2*.
double quasistatic_sigma(double t2star);

NoiseRealization sample_quasistatic_noise(const DeviceParams& p, std::mt19937_64& rng);

/// Realization for one shot, reproducible from (seed, shot).
NoiseRealization quasistatic_noise_for_shot(const DeviceParams& p, std::uint64_t seed,
                                            std::uint64_t shot);

struct EvolveOptions {
  /// Apply continuous phase damping at rate 1/T2echo per qubit.
  bool markovian = true;
  /// Multiplies the maximum timestep; convergence checks use 0.5.
  double dt_scale = 1.0;
  /// Absolute time of the schedule start, s. Sets the phase of off-resonant
  /// drive and flip-flop terms.
  double t_offset = 0.0;
};

/// Largest timestep allowed for a segment.
double max_timestep(const DeviceParams& p, const Segment& s, double dt_scale = 1.0);

/// Density-matrix evolution of a two-qubit state through the schedule.
DensityMatrix evolve(const DeviceParams& p, const PulseSchedule& schedule,
                     const NoiseRealization& noise, const DensityMatrix& rho0,
                     const EvolveOptions& opts = {});

/// Same as evolve, calling `after_segment(i, rho)` after every segment.
DensityMatrix evolve_observed(const DeviceParams& p, const PulseSchedule& schedule,
                              const NoiseRealization& noise, const DensityMatrix& rho0,
                              const EvolveOptions& opts,
                              const std::function<void(std::size_t, const Mat&)>& after_segment);

/// Unitary propagator of the schedule (Markovian dephasing ignored).
Mat propagate(const DeviceParams& p, const PulseSchedule& schedule, const NoiseRealization& noise,
              const EvolveOptions& opts = {});

/// Rz(a) x Rz(b) with Rz(t) = diag(e^{-it/2}, e^{it/2}).
Mat frame_rotation(double a, double b);

}  // namespace spinq
