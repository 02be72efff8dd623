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

#include "spinq/device/schedule.hpp"

#include <algorithm>
#include <cmath>

#include "spinq/core/quantum.hpp"

namespace spinq {

double PulseSchedule::duration() const {
  double t = 0.0;
  for (const Segment& s : segments) t += s.duration;
  return t;
}

void PulseSchedule::validate() const {
  for (const Segment& s : segments) {
    if (!(s.duration > 0.0)) throw SpinqError("segment duration must be > 0");
    if (s.tones.size() > 2) throw SpinqError("at most two simultaneous tones per segment");
    if (s.barrier_voltage && s.exchange_override) {
      throw SpinqError("segment sets both barrier voltage and exchange override");
    }
    if (s.ramp < 0.0) throw SpinqError("segment ramp must be >= 0");
  }
}

void PulseSchedule::append(const PulseSchedule& tail) {
  segments.insert(segments.end(), tail.segments.begin(), tail.segments.end());
  frame = tail.frame;
}

double segment_exchange(const DeviceParams& p, const Segment& s) {
  if (s.exchange_override) return *s.exchange_override;
  if (s.barrier_voltage) return exchange_from_voltage(p, *s.barrier_voltage);
  return p.J_res;
}

double segment_envelope(const Segment& s, double tau) {
  if (s.shape == Shape::Square || s.ramp <= 0.0) return 1.0;
  auto edge = [&](double x) {
    if (x >= s.ramp) return 1.0;
    if (x <= 0.0) return 0.0;
    return 0.5 * (1.0 - std::cos(kPi * x / s.ramp));
  };
  return std::min(edge(tau), edge(s.duration - tau));
}

Segment drive_segment(const DeviceParams& p, int qubit, double phase, double duration) {
  Segment s;
  s.duration = duration;
  s.tones.push_back({p.frequency(qubit), p.rabi(qubit), phase});
  return s;
}

Segment dual_drive_segment(const DeviceParams& p, double phase1, double phase2, double duration) {
  Segment s;
  s.duration = duration;
  s.tones.push_back({p.f1, p.omega1, phase1});
  s.tones.push_back({p.f2, p.omega2, phase2});
  return s;
}

Segment idle_segment(double duration) {
  Segment s;
  s.duration = duration;
  return s;
}

Segment exchange_hold(double j, double duration) {
  Segment s;
  s.duration = duration;
  s.exchange_override = j;
  return s;
}

}  // namespace spinq
