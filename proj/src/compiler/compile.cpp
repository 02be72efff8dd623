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

#include "spinq/compiler/compile.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <tuple>

#include "spinq/device/evolve.hpp"

namespace spinq {

Segment layer_segment(const DeviceParams& p, const CompileOptions& opts, int mask, double phase1, double phase2) {
  Segment s;
  s.duration = p.t_pi2;
  const double ramp = std::min(opts.drive_ramp, 0.5 * p.t_pi2);
  const double gain = ramp > 0.0 ? p.t_pi2 / (p.t_pi2 - ramp) : 1.0;
  if (mask & 1) s.tones.push_back({p.f1, p.omega1 * gain, phase1});
  if (mask & 2) s.tones.push_back({p.f2, p.omega2 * gain, phase2});
  if (ramp > 0.0 && !s.tones.empty()) {
    s.shape = Shape::CosineRamped;
    s.ramp = ramp;
  }
  return s;
}

namespace {

Mat rz(double a) {
  Mat m = Mat::Zero(2, 2);
  m(0, 0) = std::polar(1.0, -a / 2);
  m(1, 1) = std::polar(1.0, a / 2);
  return m;
}

// Model of a layer with corrections undone: Rz(a) G Rz(a) on driven qubits,
// Rz(a) on idle ones.
double layer_mismatch(const Mat& u, int mask, double a0, double a1) {
  const Mat x90 = (pauli::I2() - cplx(0, 1) * pauli::X()) / std::sqrt(2.0);
  auto part = [&](int q, double a) -> Mat {
    const bool driven = mask & (1 << q);
    return driven ? Mat(rz(a) * x90 * rz(a)) : rz(a);
  };
  const Mat model = kron(part(0, a0), part(1, a1));
  return 1.0 - std::norm((model.adjoint() * u).trace()) / 16.0;
}

double golden_min1(const std::function<double(double)>& f, double a, double b) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > 1e-12) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

LayerCorrections calibrate_layers(const DeviceParams& params, const CompileOptions& opts) {
  LayerCorrections out;
  if (!opts.stark_compensation) return out;
  // Keyed on everything the layer propagator depends on.
  using Key = std::tuple<double, double, double, double, double, double, double>;
  static std::mutex mu;
  static std::map<Key, LayerCorrections> cache;
  const Key key{params.f1, params.f2, params.omega1, params.omega2, params.t_pi2, params.J_res, opts.drive_ramp};
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  const DeviceParams p = params.noiseless();
  for (int mask = 1; mask <= 3; ++mask) {
    PulseSchedule s;
    s.segments.push_back(layer_segment(p, opts, mask, 0.0, 0.0));
    const Mat u = propagate(p, s, {}, {false, 1.0, 0.0});
    double a0 = 0.0, a1 = 0.0;
    for (int round = 0; round < 6; ++round) {
      a0 = golden_min1([&](double x) { return layer_mismatch(u, mask, x, a1); }, a0 - 0.2, a0 + 0.2);
      a1 = golden_min1([&](double x) { return layer_mismatch(u, mask, a0, x); }, a1 - 0.2, a1 + 0.2);
    }
    out.z[static_cast<std::size_t>(mask)] = {-a0, -a1};
  }
  std::lock_guard lock(mu);
  cache.emplace(key, out);
  return out;
}

Segment cz_segment(const DeviceParams& p, const CZCalibration& cal) {
  Segment s;
  s.duration = cal.t_cz;
  const double j_lo = exchange_from_voltage(p, p.V_min);
  const double j_hi = exchange_from_voltage(p, p.V_max);
  if (cal.j_peak > p.J_res && cal.j_peak >= j_lo * (1 - 1e-12) && cal.j_peak <= j_hi * (1 + 1e-12)) {
    s.barrier_voltage = voltage_for_exchange(p, cal.j_peak);
  } else {
    s.exchange_override = cal.j_peak;
  }
  s.shape = cal.ramp > 0.0 ? Shape::CosineRamped : Shape::Square;
  s.ramp = cal.ramp;
  return s;
}

Compiler::Compiler(const DeviceParams& p, std::optional<CZCalibration> cal, const CompileOptions& opts)
    : p_(p), cal_(std::move(cal)), opts_(opts), corr_(calibrate_layers(p, opts)) {}

void Compiler::flush() {
  if (!pending_[0] && !pending_[1]) return;
  int mask = 0;
  for (int q = 0; q < 2; ++q) {
    const auto& g = pending_[static_cast<std::size_t>(q)];
    if (g && g->kind != GateKind::I) mask |= 1 << q;
  }
  if (mask == 0) {
    out_.segments.push_back(idle_segment(p_.t_pi2));
  } else {
    const auto& z = corr_.z[static_cast<std::size_t>(mask)];
    std::array<double, 2> phase{0.0, 0.0};
    for (int q = 0; q < 2; ++q) {
      const auto qi = static_cast<std::size_t>(q);
      if (mask & (1 << q)) {
        phase[qi] = wrap_angle(pending_[qi]->phase + z[qi]);
        frame_[qi] = wrap_angle(frame_[qi] + 2 * z[qi]);
      } else {
        frame_[qi] = wrap_angle(frame_[qi] + z[qi]);
      }
    }
    out_.segments.push_back(layer_segment(p_, opts_, mask, phase[0], phase[1]));
  }
  pending_[0].reset();
  pending_[1].reset();
}

void Compiler::add(const GateOp& g) {
  switch (g.kind) {
    case GateKind::Z: {
      auto& f = frame_[static_cast<std::size_t>(g.qubit)];
      f = wrap_angle(f + g.angle);
      return;
    }
    case GateKind::CZ: {
      if (!cal_) throw SpinqError("circuit uses CZ but no CZ calibration was supplied");
      flush();
      out_.segments.push_back(cz_segment(p_, *cal_));
      frame_[0] = wrap_angle(frame_[0] + cal_->phi1);
      frame_[1] = wrap_angle(frame_[1] + cal_->phi2);
      return;
    }
    case GateKind::I:
    case GateKind::X90:
    case GateKind::Y90: {
      auto& slot = pending_[static_cast<std::size_t>(g.qubit)];
      if (slot) flush();
      const double f = frame_[static_cast<std::size_t>(g.qubit)];
      const double phase = g.kind == GateKind::Y90 ? wrap_angle(f - kPi / 2) : f;
      slot = Pending{g.kind, phase};
      return;
    }
  }
}

void Compiler::add(const Circuit& c) {
  for (const auto& g : c.ops) add(g);
}

void Compiler::add_segment(const Segment& s) {
  flush();
  out_.segments.push_back(s);
}

PulseSchedule Compiler::take() {
  flush();
  PulseSchedule s = std::move(out_);
  out_ = PulseSchedule{};
  s.frame = frame_;
  return s;
}

PulseSchedule compile_circuit(const Circuit& c, const std::optional<CZCalibration>& cal, const DeviceParams& p,
                              const CompileOptions& opts) {
  Compiler comp(p, cal, opts);
  comp.add(c);
  return comp.take();
}

}  // namespace spinq
