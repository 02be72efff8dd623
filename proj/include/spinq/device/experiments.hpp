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
#include <vector>

#include "spinq/core/quantum.hpp"
#include "spinq/device/evolve.hpp"
#include "spinq/device/params.hpp"
#include "spinq/device/schedule.hpp"
#include "spinq/device/spam.hpp"

namespace spinq {

/// How a schedule is turned into outcome statistics.
struct SimulationMode {
  /// Quasi-static and Markovian dephasing on. SPAM always comes from the
  /// parameters; pass DeviceParams::noiseless() for perfect SPAM as well.
  bool noisy = false;
  /// 0 means exact probabilities; otherwise shots are split evenly over
  /// the noise realizations and sampled with readout errors.
  std::int64_t shots = 0;
  int noise_realizations = 1;
  std::uint64_t seed = 0;
};

/// Outcome statistics of one schedule started from the imperfect |dd>.
struct ScheduleOutcome {
  ProbabilityVector probs;
  /// Standard error of each probability across realizations and shots.
  std::array<double, 4> stderr_{};
  /// Standard error of P(up) of each qubit.
  std::array<double, 2> up_stderr{};
};

/// Combines per-realization outcome probabilities (readout already applied)
/// into the statistics `mode` asks for, sampling shots when requested.
ScheduleOutcome aggregate_outcomes(const std::vector<ProbabilityVector>& per_realization,
                                   const SimulationMode& mode, std::uint64_t key);

/// Per-realization outcome probabilities of `schedule`.
std::vector<ProbabilityVector> realization_probabilities(const DeviceParams& p, const PulseSchedule& schedule,
                                                         const SimulationMode& mode, std::uint64_t key);

/// Runs `schedule` under `mode`. `key` selects the noise and shot streams so
/// that different call sites sharing a seed stay independent.
ScheduleOutcome simulate_schedule(const DeviceParams& p, const PulseSchedule& schedule,
                                  const SimulationMode& mode, std::uint64_t key);

/// Rabi chevron of one qubit: P_up[f index][tau index].
struct ChevronResult {
  std::vector<double> frequencies;
  std::vector<double> durations;
  std::vector<std::vector<double>> p_up;
};

ChevronResult rabi_chevron(const DeviceParams& p, int qubit, const std::vector<double>& f_grid,
                           const std::vector<double>& tau_grid, const SimulationMode& mode);

enum class CoherenceKind { Ramsey, HahnEcho };

struct CoherenceResult {
  CoherenceKind kind = CoherenceKind::Ramsey;
  std::vector<double> delays;
  std::vector<double> p_up;
  std::vector<double> stderr_;
  double time_constant = 0.0;  // +inf when flat
  double amplitude = 0.0;
  double offset = 0.0;
  /// False when the data show no resolvable decay.
  bool decaying = false;
};

struct CoherenceOptions {
  /// Ramsey only: the second pulse phase advances by 2 pi * detuning * t.
  double detuning = 0.0;
};

/// Ramsey: X90, wait t, X90, fitted to exp(-(t/T2*)^2) with the Markovian
/// exp(-t/T2echo) factor of the parameters taken as known. Echo: X90, wait
/// t/2, X180, wait t/2, X90, fitted to exp(-t/T2echo).
CoherenceResult coherence_experiment(const DeviceParams& p, int qubit, CoherenceKind kind,
                                     const std::vector<double>& delays, const SimulationMode& mode,
                                     const CoherenceOptions& opts = {});

enum class ExchangeMode { RamseyOscillation, EchoResidual };

struct ExchangePoint {
  double voltage = 0.0;
  double j_programmed = 0.0;
  double j_estimate = 0.0;  // NaN when not resolvable
  bool resolvable = false;
  /// Smallest J the mode can resolve at these parameters.
  double floor = 0.0;
};

/// Conditional precession of Q2 with Q1 prepared down and up, read in two
/// quadratures. J is the difference of the two precession rates.
ExchangePoint measure_exchange(const DeviceParams& p, double j, ExchangeMode mode, const SimulationMode& sim,
                               std::uint64_t key = 0);

std::vector<ExchangePoint> exchange_spectroscopy(const DeviceParams& p, const std::vector<double>& v_grid,
                                                 ExchangeMode mode, const SimulationMode& sim);

const char* to_string(CoherenceKind k);
const char* to_string(ExchangeMode m);

}  // namespace spinq
