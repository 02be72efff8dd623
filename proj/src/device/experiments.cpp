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

#include "spinq/device/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spinq/util/fitting.hpp"
#include "spinq/util/parallel.hpp"
#include "spinq/util/rng.hpp"

namespace spinq {

namespace {

constexpr std::uint64_t kChevronKey = 0x100;
constexpr std::uint64_t kCoherenceKey = 0x200;
constexpr std::uint64_t kExchangeKey = 0x300;

std::uint64_t subkey(std::uint64_t key, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) {
  return mix64(mix64(mix64(key ^ mix64(a)) ^ b) ^ mix64(c + 17));
}

int realizations(const SimulationMode& mode) {
  return mode.noisy ? std::max(1, mode.noise_realizations) : 1;
}

NoiseRealization noise_for(const DeviceParams& p, const SimulationMode& mode, std::uint64_t key, int r) {
  if (!mode.noisy) return {};
  auto rng = keyed_stream(mode.seed, {tag(StreamTag::QuasiStatic), key, static_cast<std::uint64_t>(r)});
  return sample_quasistatic_noise(p, rng);
}

EvolveOptions options_for(const SimulationMode& mode) {
  EvolveOptions o;
  o.markovian = mode.noisy;
  return o;
}

double p_up(const ProbabilityVector& v, int qubit) { return marginal_up(v, qubit); }

Segment x90(const DeviceParams& p, int q, double phase = 0.0) { return drive_segment(p, q, phase, p.t_pi2); }

}  // namespace

ScheduleOutcome aggregate_outcomes(const std::vector<ProbabilityVector>& per_realization,
                                   const SimulationMode& mode, std::uint64_t key) {
  if (per_realization.empty()) throw SpinqError("no realizations to aggregate");
  ScheduleOutcome out;
  const auto r_count = static_cast<std::int64_t>(per_realization.size());
  if (mode.shots <= 0) {
    std::array<double, 4> mean{};
    std::array<double, 2> up_mean{};
    for (const auto& pv : per_realization) {
      for (int i = 0; i < 4; ++i) mean[i] += pv[i];
      for (int q = 0; q < 2; ++q) up_mean[q] += p_up(pv, q);
    }
    for (auto& m : mean) m /= static_cast<double>(r_count);
    for (auto& m : up_mean) m /= static_cast<double>(r_count);
    for (int i = 0; i < 4; ++i) out.probs.p[i] = mean[i];
    if (r_count > 1) {
      std::array<double, 4> var{};
      std::array<double, 2> up_var{};
      for (const auto& pv : per_realization) {
        for (int i = 0; i < 4; ++i) var[i] += (pv[i] - mean[i]) * (pv[i] - mean[i]);
        for (int q = 0; q < 2; ++q) up_var[q] += (p_up(pv, q) - up_mean[q]) * (p_up(pv, q) - up_mean[q]);
      }
      const double n = static_cast<double>(r_count);
      for (int i = 0; i < 4; ++i) out.stderr_[i] = std::sqrt(var[i] / (n - 1) / n);
      for (int q = 0; q < 2; ++q) out.up_stderr[q] = std::sqrt(up_var[q] / (n - 1) / n);
    }
    return out;
  }

  MeasurementCounts total;
  for (std::int64_t r = 0; r < r_count; ++r) {
    const std::int64_t n = mode.shots / r_count + (r < mode.shots % r_count ? 1 : 0);
    if (n == 0) continue;
    auto rng = keyed_stream(mode.seed, {tag(StreamTag::Measurement), key, static_cast<std::uint64_t>(r)});
    const auto c = sample_counts(per_realization[static_cast<std::size_t>(r)], n, rng);
    for (int i = 0; i < 4; ++i) total.n[i] += c[i];
    total.shots += n;
  }
  out.probs = total.frequencies();
  const double shots = static_cast<double>(total.shots);
  for (int i = 0; i < 4; ++i) out.stderr_[i] = std::sqrt(out.probs[i] * (1.0 - out.probs[i]) / shots);
  for (int q = 0; q < 2; ++q) {
    const double u = p_up(out.probs, q);
    out.up_stderr[q] = std::sqrt(u * (1.0 - u) / shots);
  }
  return out;
}

std::vector<ProbabilityVector> realization_probabilities(const DeviceParams& p, const PulseSchedule& schedule,
                                                         const SimulationMode& mode, std::uint64_t key) {
  const int r_count = realizations(mode);
  const DensityMatrix rho0 = initial_state(p);
  const EvolveOptions opts = options_for(mode);
  std::vector<ProbabilityVector> out(static_cast<std::size_t>(r_count));
  parallel_for(out.size(), [&](std::size_t r) {
    const auto noise = noise_for(p, mode, key, static_cast<int>(r));
    out[r] = outcome_probabilities(p, evolve(p, schedule, noise, rho0, opts));
  });
  return out;
}

ScheduleOutcome simulate_schedule(const DeviceParams& p, const PulseSchedule& schedule,
                                  const SimulationMode& mode, std::uint64_t key) {
  return aggregate_outcomes(realization_probabilities(p, schedule, mode, key), mode, key);
}

ChevronResult rabi_chevron(const DeviceParams& p, int qubit, const std::vector<double>& f_grid,
                           const std::vector<double>& tau_grid, const SimulationMode& mode) {
  if (f_grid.empty() || tau_grid.empty()) throw SpinqError("rabi_chevron needs non-empty grids");
  if (qubit != 0 && qubit != 1) throw SpinqError("qubit index must be 0 or 1");
  for (double t : tau_grid) {
    if (!(t >= 0.0)) throw SpinqError("burst lengths must be >= 0");
  }
  std::vector<std::size_t> order(tau_grid.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return tau_grid[a] < tau_grid[b]; });

  ChevronResult res;
  res.frequencies = f_grid;
  res.durations = tau_grid;
  res.p_up.assign(f_grid.size(), std::vector<double>(tau_grid.size(), 0.0));

  const int r_count = realizations(mode);
  const DensityMatrix rho0 = initial_state(p);
  const EvolveOptions opts = options_for(mode);

  for (std::size_t fi = 0; fi < f_grid.size(); ++fi) {
    // One segment per distinct burst length; the state after each segment
    // is the state after that burst.
    PulseSchedule sched;
    std::vector<std::size_t> seg_of_sorted(order.size());
    double t_prev = 0.0;
    for (std::size_t k = 0; k < order.size(); ++k) {
      const double t = tau_grid[order[k]];
      if (t > t_prev) {
        Segment s;
        s.duration = t - t_prev;
        s.tones.push_back({f_grid[fi], p.rabi(qubit), 0.0});
        sched.segments.push_back(s);
        t_prev = t;
      }
      seg_of_sorted[k] = sched.segments.size();  // 0 means "before any segment"
    }

    std::vector<std::vector<ProbabilityVector>> per_tau(tau_grid.size(),
                                                        std::vector<ProbabilityVector>(static_cast<std::size_t>(r_count)));
    parallel_for(static_cast<std::size_t>(r_count), [&](std::size_t r) {
      const auto noise = noise_for(p, mode, subkey(kChevronKey, fi), static_cast<int>(r));
      std::vector<ProbabilityVector> after(sched.segments.size() + 1);
      after[0] = outcome_probabilities(p, rho0);
      if (!sched.segments.empty()) {
        evolve_observed(p, sched, noise, rho0, opts, [&](std::size_t i, const Mat& rho) {
          after[i + 1] = outcome_probabilities(p, DensityMatrix(rho, 1e-8));
        });
      }
      for (std::size_t k = 0; k < order.size(); ++k) per_tau[order[k]][r] = after[seg_of_sorted[k]];
    });
    for (std::size_t ti = 0; ti < tau_grid.size(); ++ti) {
      const auto o = aggregate_outcomes(per_tau[ti], mode, subkey(kChevronKey, fi, ti));
      res.p_up[fi][ti] = p_up(o.probs, qubit);
    }
  }
  return res;
}

CoherenceResult coherence_experiment(const DeviceParams& p, int qubit, CoherenceKind kind,
                                     const std::vector<double>& delays, const SimulationMode& mode,
                                     const CoherenceOptions& opts) {
  if (qubit != 0 && qubit != 1) throw SpinqError("qubit index must be 0 or 1");
  if (delays.size() < 3) throw SpinqError("coherence experiment needs >= 3 delays");
  for (double t : delays) {
    if (!(t > 0.0)) throw SpinqError("delays must be positive");
  }
  CoherenceResult res;
  res.kind = kind;
  res.delays = delays;
  res.p_up.resize(delays.size());
  res.stderr_.resize(delays.size());

  for (std::size_t i = 0; i < delays.size(); ++i) {
    const double t = delays[i];
    PulseSchedule s;
    s.segments.push_back(x90(p, qubit));
    if (kind == CoherenceKind::Ramsey) {
      s.segments.push_back(idle_segment(t));
      s.segments.push_back(x90(p, qubit, kTwoPi * opts.detuning * t));
    } else {
      s.segments.push_back(idle_segment(t / 2));
      s.segments.push_back(drive_segment(p, qubit, 0.0, 2 * p.t_pi2));
      s.segments.push_back(idle_segment(t / 2));
      s.segments.push_back(x90(p, qubit));
    }
    const auto o = simulate_schedule(p, s, mode, subkey(kCoherenceKey + static_cast<std::uint64_t>(kind), qubit, i));
    res.p_up[i] = p_up(o.probs, qubit);
    res.stderr_[i] = o.up_stderr[qubit];
  }

  EnvelopeFit fit;
  if (kind == CoherenceKind::Ramsey) {
    const double t2 = mode.noisy ? p.t2echo(qubit) : kInfinity;
    const double det = opts.detuning;
    // Finite pi/2 pulses add 2 t_pi2 / pi of effective free precession each.
    const double t_extra = 4.0 * p.t_pi2 / kPi;
    std::vector<double> t_eff(delays.size());
    for (std::size_t i = 0; i < delays.size(); ++i) t_eff[i] = delays[i] + t_extra;
    fit = fit_decay_envelope(t_eff, res.p_up, 2.0, [t2, det, t_extra](double t) {
      return std::exp(-t / t2) * std::cos(kTwoPi * det * (t - t_extra));
    });
  } else {
    fit = fit_decay_envelope(res.delays, res.p_up, 1.0);
  }
  res.time_constant = fit.time_constant;
  res.amplitude = fit.amplitude;
  res.offset = fit.offset;
  res.decaying = fit.decaying;
  if (!res.decaying) res.time_constant = kInfinity;
  return res;
}

namespace {

ExchangePoint exchange_point(const DeviceParams& p, double j, std::optional<double> voltage, ExchangeMode mode,
                             const SimulationMode& sim, std::uint64_t key) {
  constexpr int kTarget = 1;
  constexpr int kPoints = 16;
  ExchangePoint pt;
  pt.j_programmed = j;
  pt.voltage = voltage.value_or(std::numeric_limits<double>::quiet_NaN());

  const double coherence = !sim.noisy              ? kInfinity
                           : mode == ExchangeMode::RamseyOscillation ? p.t2star(kTarget)
                                                                     : p.t2echo(kTarget);
  double tau_max = j > 0.0 ? 1.0 / j : kInfinity;
  tau_max = std::min(tau_max, coherence);
  if (!std::isfinite(tau_max)) tau_max = 1e-5;
  pt.floor = std::max(std::isfinite(coherence) ? 1.0 / coherence : 0.0, 0.1 / tau_max);

  auto hold = [&](double d) {
    Segment s;
    s.duration = d;
    if (voltage) {
      s.barrier_voltage = *voltage;
    } else {
      s.exchange_override = j;
    }
    return s;
  };

  const int r_count = realizations(sim);
  const EvolveOptions base = options_for(sim);
  const DensityMatrix rho0 = initial_state(p);
  std::array<double, 2> slope{};

  for (int control = 0; control < 2; ++control) {
    PulseSchedule prefix;
    if (control == 1) prefix.segments.push_back(drive_segment(p, 0, 0.0, 2 * p.t_pi2));
    prefix.segments.push_back(x90(p, kTarget));
    const double t0 = prefix.duration();

    // probs[tau][quadrature][realization]
    std::vector<std::array<std::vector<ProbabilityVector>, 2>> probs(kPoints);
    for (auto& a : probs) {
      for (auto& v : a) v.resize(static_cast<std::size_t>(r_count));
    }
    parallel_for(static_cast<std::size_t>(r_count), [&](std::size_t r) {
      // Both control branches share realizations so static offsets cancel.
      const auto noise = noise_for(p, sim, key, static_cast<int>(r));
      const DensityMatrix start = evolve(p, prefix, noise, rho0, base);
      for (int k = 0; k < kPoints; ++k) {
        const double tau = tau_max * k / kPoints;
        for (int quad = 0; quad < 2; ++quad) {
          PulseSchedule tail;
          if (mode == ExchangeMode::RamseyOscillation) {
            if (tau > 0) tail.segments.push_back(hold(tau));
          } else {
            if (tau > 0) tail.segments.push_back(hold(tau / 2));
            tail.segments.push_back(dual_drive_segment(p, 0.0, 0.0, 2 * p.t_pi2));
            if (tau > 0) tail.segments.push_back(hold(tau / 2));
          }
          tail.segments.push_back(x90(p, kTarget, quad == 0 ? 0.0 : -kPi / 2));
          EvolveOptions o = base;
          o.t_offset = t0;
          probs[k][quad][r] = outcome_probabilities(p, evolve(p, tail, noise, start, o));
        }
      }
    });

    std::vector<double> taus(kPoints), theta(kPoints);
    for (int k = 0; k < kPoints; ++k) {
      taus[k] = tau_max * k / kPoints;
      const auto ox = aggregate_outcomes(probs[k][0], sim, subkey(key, control, k, 0));
      const auto oy = aggregate_outcomes(probs[k][1], sim, subkey(key, control, k, 1));
      theta[k] = std::atan2(2 * p_up(oy.probs, kTarget) - 1, 2 * p_up(ox.probs, kTarget) - 1);
      if (k > 0) {
        while (theta[k] - theta[k - 1] > kPi) theta[k] -= kTwoPi;
        while (theta[k] - theta[k - 1] < -kPi) theta[k] += kTwoPi;
      }
    }
    slope[control] = fit_line(taus, theta).slope;
  }

  const double est = std::abs(slope[1] - slope[0]) / kTwoPi;
  pt.resolvable = std::isfinite(est) && est >= pt.floor;
  pt.j_estimate = pt.resolvable ? est : std::numeric_limits<double>::quiet_NaN();
  return pt;
}

}  // namespace

ExchangePoint measure_exchange(const DeviceParams& p, double j, ExchangeMode mode, const SimulationMode& sim,
                               std::uint64_t key) {
  if (j < 0.0) throw SpinqError("exchange must be >= 0");
  return exchange_point(p, j, std::nullopt, mode, sim, subkey(kExchangeKey, key));
}

std::vector<ExchangePoint> exchange_spectroscopy(const DeviceParams& p, const std::vector<double>& v_grid,
                                                 ExchangeMode mode, const SimulationMode& sim) {
  std::vector<ExchangePoint> out;
  out.reserve(v_grid.size());
  for (std::size_t i = 0; i < v_grid.size(); ++i) {
    const double v = v_grid[i];
    if (v < p.V_min - 1e-12 || v > p.V_max + 1e-12) throw SpinqError("barrier voltage outside the sweep range");
    out.push_back(exchange_point(p, exchange_from_voltage(p, v), v, mode, sim,
                                 subkey(kExchangeKey, 0x5f, i, static_cast<std::uint64_t>(mode))));
  }
  return out;
}

const char* to_string(CoherenceKind k) { return k == CoherenceKind::Ramsey ? "ramsey" : "hahn_echo"; }

const char* to_string(ExchangeMode m) {
  return m == ExchangeMode::RamseyOscillation ? "ramsey_oscillation" : "echo_residual";
}

}  // namespace spinq
