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
#include <optional>
#include <vector>

#include "spinq/device/params.hpp"

namespace spinq {

/// One microwave tone on the shared drive gate. Couples to both qubits.
struct Tone {
  double frequency = 0.0;  // Hz
  double rabi = 0.0;       // on-resonance Rabi frequency, Hz
  double phase = 0.0;      // rad; the rotation axis sits at angle -phase
};

enum class Shape { Square, CosineRamped };

struct Segment {
  double duration = 0.0;  // s
  std::vector<Tone> tones;
  /// Barrier voltage; mutually exclusive with exchange_override.
  std::optional<double> barrier_voltage;
  /// Direct exchange in Hz; when neither is set the idle J_res applies.
  std::optional<double> exchange_override;
  Shape shape = Shape::Square;
  /// Edge ramp time for CosineRamped segments, s.
  double ramp = 0.0;
};

struct PulseSchedule {
  std::vector<Segment> segments;
  /// Virtual-Z frame (rad) of each qubit after the last segment. The ideal
  /// operation equals Rz(frame[0]) x Rz(frame[1]) applied after the schedule.
  std::array<double, 2> frame{0.0, 0.0};

  double duration() const;
  /// Throws SpinqError on non-positive durations, >2 tones, or both
  /// exchange controls set on one segment.
  void validate() const;
  void append(const PulseSchedule& tail);
};

/// Exchange (Hz) at the plateau of a segment.
double segment_exchange(const DeviceParams& p, const Segment& s);

/// Envelope in [0, 1] at time `tau` within a segment.
double segment_envelope(const Segment& s, double tau);

/// Resonant square drive on one qubit.
Segment drive_segment(const DeviceParams& p, int qubit, double phase, double duration);

/// Simultaneous resonant square drives on both qubits.
Segment dual_drive_segment(const DeviceParams& p, double phase1, double phase2, double duration);

/// Undriven wait at idle exchange.
Segment idle_segment(double duration);

/// Undriven square hold at a given exchange.
Segment exchange_hold(double j, double duration);

}  // namespace spinq
