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

#include "spinq/compiler/calibration.hpp"

#include <cmath>
#include <vector>

#include "spinq/util/fitting.hpp"

namespace spinq {

namespace {

double wrap_pm(double a) { return std::remainder(a, kTwoPi); }

// Golden-section minimization of a unimodal function on [a, b].
template <class F>
double golden_min(F f, double a, double b, double tol) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a);
  double d = a + g * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
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

// P(target up) after: [pi on control], X90 target, raw CZ, X90 target at `phase`.
struct RamseyProbe {
  const DeviceParams& p;
  const CZCalibration& cal;
  const EvolveOptions& opts;
  int target;
  Vec after_cz;
  double t_end = 0.0;

  RamseyProbe(const DeviceParams& p_, const CZCalibration& c, const EvolveOptions& o, int tgt, bool control_up)
      : p(p_), cal(c), opts(o), target(tgt) {
    const int control = 1 - target;
    PulseSchedule s;
    if (control_up) s.segments.push_back(drive_segment(p, control, 0.0, 2 * p.t_pi2));
    s.segments.push_back(drive_segment(p, target, 0.0, p.t_pi2));
    s.segments.push_back(cz_segment(p, cal));
    EvolveOptions e = opts;
    e.t_offset = 0.0;
    Vec psi = Vec::Zero(4);
    psi(0) = 1.0;
    after_cz = propagate(p, s, {}, e) * psi;
    t_end = s.duration();
  }

  double p_up(double phase) const {
    PulseSchedule s;
    s.segments.push_back(drive_segment(p, target, phase, p.t_pi2));
    EvolveOptions e = opts;
    e.t_offset = t_end;
    const Vec out = propagate(p, s, {}, e) * after_cz;
    const int bit = target == 0 ? 2 : 1;
    double up = 0.0;
    for (int i = 0; i < 4; ++i) {
      if (i & bit) up += std::norm(out(i));
    }
    return up;
  }
};

}  // namespace

double conditional_phase(const Mat& u) { return std::arg(u(3, 3) * u(0, 0) / (u(1, 1) * u(2, 2))); }

Mat cz_pulse_unitary(const DeviceParams& p, const CZCalibration& cal, const EvolveOptions& opts) {
  PulseSchedule s;
  s.segments.push_back(cz_segment(p, cal));
  return propagate(p, s, {}, opts);
}

CZCalibration calibrate_cz(const DeviceParams& params, double j_peak, const CZCalibrationOptions& opts) {
  const DeviceParams p = params.noiseless();
  if (!(j_peak > 0.0)) throw SpinqError("CZ calibration needs a positive target exchange");
  if (std::abs(p.delta_ez()) / j_peak < 10.0) throw SpinqError("CZ calibration needs delta_ez / J >= 10");
  if (opts.coarse_points < 3) throw SpinqError("CZ calibration needs >= 3 coarse points");

  CZCalibration cal;
  cal.j_peak = j_peak;
  cal.ramp = opts.ramp >= 0.0 ? opts.ramp : p.cz_ramp;

  // A pi conditional phase needs the pulse area to reach half a cycle.
  const double nominal = 1.0 / (2.0 * j_peak) + cal.ramp;
  const double t_lo = std::max(2.0 * cal.ramp, 0.25 * nominal);
  const double t_hi = 10.0 * nominal;
  auto phase_error = [&](double t) {
    CZCalibration c = cal;
    c.t_cz = t;
    return std::abs(wrap_pm(conditional_phase(cz_pulse_unitary(p, c, opts.evolve)) - kPi));
  };

  const int n = opts.coarse_points;
  std::vector<double> ts(static_cast<std::size_t>(n)), errs(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    ts[k] = t_lo + (t_hi - t_lo) * k / (n - 1);
    errs[k] = phase_error(ts[k]);
  }
  int pick = -1;
  for (int k = 0; k < n; ++k) {
    const bool left = k == 0 || errs[k] <= errs[k - 1];
    const bool right = k == n - 1 || errs[k] <= errs[k + 1];
    if (left && right && errs[k] < 1.0) {
      pick = k;
      break;
    }
  }
  if (pick < 0) throw SpinqError("CZ calibration: no pi conditional phase within the duration cap");
  const double a = ts[static_cast<std::size_t>(std::max(0, pick - 1))];
  const double b = ts[static_cast<std::size_t>(std::min(n - 1, pick + 1))];
  cal.t_cz = golden_min(phase_error, a, b, 1e-14);
  const Mat u_raw = cz_pulse_unitary(p, cal, opts.evolve);
  cal.conditional_phase = conditional_phase(u_raw);
  if (std::abs(wrap_pm(cal.conditional_phase - kPi)) > opts.phase_tolerance) {
    throw SpinqError("CZ calibration: conditional phase did not converge to pi within the duration cap");
  }

  // Ramsey on each target with the control down: the software phase that
  // returns the target fully up cancels the single-qubit phase of the pulse.
  for (int target = 0; target < 2; ++target) {
    const RamseyProbe probe(p, cal, opts.evolve, target, false);
    const double phi =
        scan_then_golden_max([&](double ph) { return probe.p_up(ph); }, 0.0, kTwoPi, opts.coarse_points, 1e-7);
    (target == 0 ? cal.phi1 : cal.phi2) = wrap_angle(phi);
  }

  {
    const RamseyProbe down(p, cal, opts.evolve, 1, false);
    const RamseyProbe up(p, cal, opts.evolve, 1, true);
    cal.p_target_up_control_down = down.p_up(cal.phi2);
    cal.p_target_up_control_up = up.p_up(cal.phi2);
  }

  Mat cz = Mat::Identity(4, 4);
  cz(3, 3) = -1.0;
  const Mat u_eff = frame_rotation(cal.phi1, cal.phi2) * u_raw;
  cal.process_fidelity = process_fidelity(cz, u_eff);
  return cal;
}

std::vector<PhaseScanPoint> cz_phase_scan(const DeviceParams& params, const CZCalibration& cal,
                                          const std::vector<double>& phases, int target) {
  if (target != 0 && target != 1) throw SpinqError("qubit index must be 0 or 1");
  const DeviceParams p = params.noiseless();
  const EvolveOptions opts{false, 1.0, 0.0};
  const RamseyProbe down(p, cal, opts, target, false);
  const RamseyProbe up(p, cal, opts, target, true);
  std::vector<PhaseScanPoint> out;
  out.reserve(phases.size());
  for (double ph : phases) out.push_back({ph, down.p_up(ph), up.p_up(ph)});
  return out;
}

}  // namespace spinq
