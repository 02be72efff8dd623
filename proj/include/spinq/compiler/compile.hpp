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

#include "spinq/compiler/circuit.hpp"
#include "spinq/device/params.hpp"
#include "spinq/device/schedule.hpp"

namespace spinq {

/// Calibrated CZ: a cosine-ramped exchange pulse followed by virtual-Z
/// corrections phi1, phi2.
struct CZCalibration {
  double t_cz = 0.0;     // total pulse duration including ramps, s
  double j_peak = 0.0;   // plateau exchange, Hz
  double ramp = 0.0;     // edge ramp, s
  double phi1 = 0.0;     // rad
  double phi2 = 0.0;     // rad
  double conditional_phase = 0.0;
  double process_fidelity = 0.0;
  /// Target Ramsey check after phase correction: P2(up) with control down and up.
  double p_target_up_control_down = 0.0;
  double p_target_up_control_up = 0.0;
};

struct CompileOptions {
  /// Cosine edge ramp of compiled single-qubit pulses, s. The peak Rabi rate
  /// is raised so the pulse area stays a quarter turn.
  double drive_ramp = 10e-9;
  /// Cancel the AC Stark phase the shared drive line puts on the other qubit
  /// with virtual-Z corrections around every single-qubit layer.
  bool stark_compensation = true;
};

/// Virtual-Z corrections per layer type (index 1: Q1 driven, 2: Q2 driven,
/// 3: both). A driven qubit gets `z[q]` before and after its pulse; an
/// undriven one gets `z[q]` after the layer.
struct LayerCorrections {
  std::array<std::array<double, 2>, 4> z{};
};

/// Fits the corrections to simulated layer propagators (noiseless).
LayerCorrections calibrate_layers(const DeviceParams& p, const CompileOptions& opts);

/// Compiled single-qubit layer: tones for the driven qubits in `mask`.
Segment layer_segment(const DeviceParams& p, const CompileOptions& opts, int mask, double phase1, double phase2);

/// The raw exchange segment of a calibrated CZ.
Segment cz_segment(const DeviceParams& p, const CZCalibration& cal);

/// Streaming compiler. Single-qubit gates on different qubits merge into one
/// segment; Z gates only move the frame; CZ flushes and emits the pulse.
/// Frames carry across take() calls so a long circuit can be compiled and
/// simulated block by block.
class Compiler {
 public:
  Compiler(const DeviceParams& p, std::optional<CZCalibration> cal, const CompileOptions& opts = {});

  void add(const GateOp& g);
  void add(const Circuit& c);
  /// Inserts a raw segment after flushing pending gates.
  void add_segment(const Segment& s);
  /// Schedule accumulated since the last take; its frame is the absolute
  /// frame reached so far.
  PulseSchedule take();
  const std::array<double, 2>& frame() const { return frame_; }

 private:
  struct Pending {
    GateKind kind;
    double phase;
  };
  void flush();

  const DeviceParams& p_;
  std::optional<CZCalibration> cal_;
  CompileOptions opts_;
  LayerCorrections corr_;
  std::array<double, 2> frame_{0.0, 0.0};
  std::array<std::optional<Pending>, 2> pending_;
  PulseSchedule out_;
};

PulseSchedule compile_circuit(const Circuit& c, const std::optional<CZCalibration>& cal, const DeviceParams& p,
                              const CompileOptions& opts = {});

}  // namespace spinq
