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

#include "spinq/bench/rb.hpp"

#include <algorithm>
#include <cmath>

#include "spinq/compiler/calibration.hpp"
#include "spinq/device/evolve.hpp"
#include "spinq/device/experiments.hpp"
#include "spinq/device/spam.hpp"
#include "spinq/util/parallel.hpp"
#include "spinq/util/rng.hpp"

namespace spinq {

void RBConfig::validate() const {
  if (lengths.empty()) throw SpinqError("RB needs at least one length");
  if (lengths.size() < 3) throw SpinqError("RB needs at least three lengths to fit a decay");
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    if (lengths[i] < 1) throw SpinqError("RB lengths must be >= 1");
    if (i > 0 && lengths[i] <= lengths[i - 1]) throw SpinqError("RB lengths must be strictly ascending");
  }
  if (sequences_per_length < 2) throw SpinqError("RB needs at least two sequences per length");
  if (shots_per_sequence < 0) throw SpinqError("shots per sequence must be >= 0");
  if (bootstrap_resamples < 100) throw SpinqError("bootstrap needs at least 100 resamples");
  if (!(confidence_level > 0.0 && confidence_level < 1.0)) throw SpinqError("confidence level must lie in (0, 1)");
  if (injected_depolarizing && !(*injected_depolarizing >= 0.0 && *injected_depolarizing <= 1.0)) {
    throw SpinqError("injected depolarizing strength must lie in [0, 1]");
  }
  if (noise_realizations < 0) throw SpinqError("noise realizations must be >= 0");
  if (!(j_cz > 0.0)) throw SpinqError("CZ exchange must be > 0");
  if (interleave) {
    // Must be a Clifford so the recovery stays exact.
    circuit_tableau(*interleave);
  }
}

std::vector<Circuit> build_rb_blocks(int m, const CliffordTable& table, std::mt19937_64& rng,
                                     const std::optional<Circuit>& interleave) {
  if (m < 1) throw SpinqError("RB sequence length must be >= 1");
  std::uint32_t inter = table.identity();
  if (interleave) inter = table.index_of(circuit_tableau(*interleave));
  std::vector<Circuit> blocks;
  std::uint32_t net = table.identity();
  for (int i = 0; i < m; ++i) {
    const std::uint32_t c = table.sample(rng);
    blocks.push_back(table.decompose(c));
    net = table.compose(net, c);
    if (interleave) {
      blocks.push_back(*interleave);
      net = table.compose(net, inter);
    }
  }
  blocks.push_back(table.decompose(table.invert(net)));
  return blocks;
}

Circuit build_rb_sequence(int m, const CliffordTable& table, std::mt19937_64& rng,
                          const std::optional<Circuit>& interleave) {
  Circuit c;
  c.name = "rb_m" + std::to_string(m);
  for (const auto& b : build_rb_blocks(m, table, rng, interleave)) c.append(b);
  return c;
}

namespace {

std::uint64_t sequence_key(int kind, int m, int s) {
  return mix64(mix64(mix64(0x5eb0000ULL + static_cast<std::uint64_t>(kind)) ^ static_cast<std::uint64_t>(m)) ^
               static_cast<std::uint64_t>(s));
}

double injected_return_probability(const DeviceParams& ideal, const CZCalibration& cal, const CompileOptions& copts,
                                   const std::vector<Circuit>& blocks, bool interleaved, double lambda) {
  Compiler comp(ideal, cal, copts);
  Mat rho = Mat::Zero(4, 4);
  rho(0, 0) = 1.0;
  const Mat mixed = Mat::Identity(4, 4) / 4.0;
  double t = 0.0;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    comp.add(blocks[i]);
    const PulseSchedule s = comp.take();
    if (!s.segments.empty()) {
      EvolveOptions o;
      o.markovian = false;
      o.t_offset = t;
      const Mat u = propagate(ideal, s, {}, o);
      rho = u * rho * u.adjoint();
      t += s.duration();
    }
    // The interleaved gate stays ideal; only Cliffords carry the channel.
    const bool gate_block = interleaved && i % 2 == 1 && i + 1 < blocks.size();
    if (!gate_block) rho = (1.0 - lambda) * rho + lambda * mixed;
  }
  return std::clamp(rho(0, 0).real(), 0.0, 1.0);
}

RBCurve run_curve(const RBConfig& cfg, const DeviceParams& params, bool noisy, const CZCalibration& cal,
                  const std::optional<Circuit>& interleave, int kind) {
  const CliffordTable& table = clifford_table();
  const std::size_t nl = cfg.lengths.size();
  const auto ns = static_cast<std::size_t>(cfg.sequences_per_length);
  std::vector<double> flat(nl * ns, 0.0);

  const DeviceParams ideal = params.noiseless();
  const DeviceParams& sim_params = noisy && !cfg.injected_depolarizing ? params : ideal;
  SimulationMode mode;
  mode.noisy = noisy && !cfg.injected_depolarizing;
  mode.shots = cfg.shots_per_sequence;
  mode.seed = cfg.seed;
  mode.noise_realizations = 1;
  if (mode.noisy) {
    mode.noise_realizations = cfg.noise_realizations > 0 ? cfg.noise_realizations
                                                         : static_cast<int>(std::max<std::int64_t>(1, mode.shots));
  }

  parallel_for(flat.size(), [&](std::size_t idx) {
    const std::size_t li = idx / ns;
    const int s = static_cast<int>(idx % ns);
    const int m = cfg.lengths[li];
    auto rng = keyed_stream(cfg.seed, {tag(StreamTag::Sequence), static_cast<std::uint64_t>(kind),
                                       static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(s)});
    const auto blocks = build_rb_blocks(m, table, rng, interleave);
    const std::uint64_t key = sequence_key(kind, m, s);
    if (cfg.injected_depolarizing) {
      const double p00 = injected_return_probability(ideal, cal, cfg.compile, blocks, interleave.has_value(),
                                                     *cfg.injected_depolarizing);
      ProbabilityVector pv;
      pv.p = {p00, (1.0 - p00) / 3.0, (1.0 - p00) / 3.0, (1.0 - p00) / 3.0};
      SimulationMode single = mode;
      single.noise_realizations = 1;
      flat[idx] = aggregate_outcomes({pv}, single, key).probs[0];
      return;
    }
    Compiler comp(sim_params, cal, cfg.compile);
    for (const auto& b : blocks) comp.add(b);
    const PulseSchedule sched = comp.take();
    // Realizations run serially here; the parallelism is over sequences.
    const auto per = [&] {
      std::vector<ProbabilityVector> out(static_cast<std::size_t>(mode.noisy ? mode.noise_realizations : 1));
      const DensityMatrix rho0 = initial_state(sim_params);
      EvolveOptions o;
      o.markovian = mode.noisy;
      for (std::size_t r = 0; r < out.size(); ++r) {
        NoiseRealization noise;
        if (mode.noisy) {
          auto nrng = keyed_stream(cfg.seed, {tag(StreamTag::QuasiStatic), key, static_cast<std::uint64_t>(r)});
          noise = sample_quasistatic_noise(sim_params, nrng);
        }
        out[r] = outcome_probabilities(sim_params, evolve(sim_params, sched, noise, rho0, o));
      }
      return out;
    }();
    flat[idx] = aggregate_outcomes(per, mode, key).probs[0];
  });

  RBCurve curve;
  curve.data.lengths = cfg.lengths;
  for (std::size_t li = 0; li < nl; ++li) {
    curve.data.per_sequence.emplace_back(flat.begin() + static_cast<std::ptrdiff_t>(li * ns),
                                         flat.begin() + static_cast<std::ptrdiff_t>((li + 1) * ns));
    curve.counts.push_back(cfg.sequences_per_length);
  }
  curve.means = curve.data.means();
  curve.stderrs = curve.data.stderrs();
  curve.fit = fit_decay(curve.data, cfg.fit);
  return curve;
}

void bracket(ConfidenceInterval& ci, double point, bool& extended) {
  if (point < ci.lo) {
    ci.lo = point;
    extended = true;
  }
  if (point > ci.hi) {
    ci.hi = point;
    extended = true;
  }
}

}  // namespace

RBResult run_rb(const RBConfig& config, const DeviceParams& params, bool noisy) {
  config.validate();
  params.validate();
  RBResult res;
  res.cz = calibrate_cz(params, config.j_cz);
  const int d = config.fit.dimension;

  res.reference = run_curve(config, params, noisy, res.cz, std::nullopt, 0);
  res.clifford = rb_fidelity(std::max(res.reference.fit.p, 1e-300), d);
  const auto f_of = [d](double p) { return rb_fidelity(std::max(p, 1e-300), d).F; };
  res.clifford_ci = bootstrap_ci({res.reference.data}, [&](const std::vector<DecayFit>& f) { return f_of(f[0].p); },
                                 config.bootstrap_resamples, config.confidence_level, config.seed, config.fit);
  bracket(res.clifford_ci, res.clifford.F, res.ci_extended);

  if (config.interleave) {
    res.interleaved = run_curve(config, params, noisy, res.cz, config.interleave, 1);
    const auto g_of = [d](double p_int, double p_ref) {
      return interleaved_fidelity(std::max(p_int, 1e-300), std::max(p_ref, 1e-300), d);
    };
    res.gate = g_of(res.interleaved->fit.p, res.reference.fit.p);
    res.gate_ci = bootstrap_ci(
        {res.reference.data, res.interleaved->data},
        [&](const std::vector<DecayFit>& f) { return g_of(f[1].p, f[0].p).F; }, config.bootstrap_resamples,
        config.confidence_level, config.seed ^ 0x1eafULL, config.fit);
    bracket(*res.gate_ci, res.gate->F, res.ci_extended);
  }
  return res;
}

}  // namespace spinq
