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

#include <cmath>
#include <complex>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "spinq/device/evolve.hpp"
#include "spinq/device/experiments.hpp"
#include "spinq/device/spam.hpp"
#include "spinq/util/fitting.hpp"
#include "spinq/util/rng.hpp"

using namespace spinq;

namespace {

double up_population(const Mat& rho, int q) {
  const int bit = q == 0 ? 2 : 1;
  double s = 0.0;
  for (int i = 0; i < 4; ++i) {
    if ((i & bit) != 0) s += rho(i, i).real();
  }
  return s;
}

// Reduced density matrix of qubit q.
Mat reduced(const Mat& rho, int q) {
  Mat r = Mat::Zero(2, 2);
  for (int i = 0; i < 4; ++i) {
    for (int k = 0; k < 4; ++k) {
      const int ai = q == 0 ? i >> 1 : i & 1, ak = q == 0 ? k >> 1 : k & 1;
      const int bi = q == 0 ? i & 1 : i >> 1, bk = q == 0 ? k & 1 : k >> 1;
      if (bi == bk) r(ai, ak) += rho(i, k);
    }
  }
  return r;
}

// Frequency of the strongest Fourier component of a uniformly sampled trace.
double dominant_frequency(const std::vector<double>& t, const std::vector<double>& y, double f_lo, double f_hi) {
  double mean = 0.0;
  for (double v : y) mean += v / static_cast<double>(y.size());
  auto power = [&](double f) {
    std::complex<double> s = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) s += (y[i] - mean) * std::polar(1.0, -kTwoPi * f * t[i]);
    return std::norm(s);
  };
  return scan_then_golden_max(power, f_lo, f_hi, 400, 1e-3);
}

DeviceParams ideal() { return DeviceParams{}.noiseless(); }

}  // namespace

TEST(DeviceParams, DefaultsAreValid) {
  EXPECT_TRUE(DeviceParams{}.violations().empty());
  DeviceParams p;
  p.T2star1 = 30e-6;
  EXPECT_THROW(p.validate(), SpinqError);
  p = DeviceParams{};
  p.M2 = 0.4;
  EXPECT_FALSE(p.violations().empty());
}

TEST(ExchangeCurve, Examples) {
  DeviceParams p;
  p.J_res = 1e3;
  EXPECT_DOUBLE_EQ(exchange_from_voltage(p, p.V_ref), p.J_res + p.J0);
  EXPECT_NEAR(exchange_from_voltage(p, p.V_ref + p.V0 * std::log(10.0)), p.J_res + 10 * p.J0, 1e-6);
  const DeviceParams d;
  EXPECT_GE(exchange_from_voltage(d, d.V_max) / exchange_from_voltage(d, d.V_min), 1000.0);
}

TEST(ExchangeCurve, StrictlyMonotoneOverSweep) {
  const DeviceParams p;
  double prev = -1.0;
  for (int i = 0; i < 1000; ++i) {
    const double j = exchange_from_voltage(p, p.V_min + (p.V_max - p.V_min) * i / 999.0);
    EXPECT_GT(j, prev);
    prev = j;
  }
}

TEST(ExchangeCurve, InverseRoundTrip) {
  const DeviceParams p;
  for (double j : {2e4, 3e5, 5e6}) EXPECT_NEAR(exchange_from_voltage(p, voltage_for_exchange(p, j)), j, 1e-6 * j);
  EXPECT_THROW(voltage_for_exchange(p, 0.0), SpinqError);
}

TEST(QuasiStaticNoise, InfiniteT2StarGivesZero) {
  const DeviceParams p = ideal();
  auto rng = keyed_stream(1, {tag(StreamTag::QuasiStatic)});
  for (int i = 0; i < 100; ++i) {
    const auto n = sample_quasistatic_noise(p, rng);
    EXPECT_EQ(n.delta_f1, 0.0);
    EXPECT_EQ(n.delta_f2, 0.0);
  }
}

TEST(QuasiStaticNoise, SigmaAndGaussianEnvelope) {
  const DeviceParams p;
  EXPECT_NEAR(quasistatic_sigma(1.7e-6), 132.4e3, 0.1e3);
  auto rng = keyed_stream(2, {tag(StreamTag::QuasiStatic)});
  constexpr int kDraws = 100000;
  std::vector<double> df(kDraws);
  for (double& d : df) d = sample_quasistatic_noise(p, rng).delta_f1;
  for (double t = 0.0; t <= 2 * p.T2star1; t += 0.1e-6) {
    double avg = 0.0;
    for (double d : df) avg += std::cos(kTwoPi * d * t) / kDraws;
    EXPECT_NEAR(avg, std::exp(-std::pow(t / p.T2star1, 2)), 0.01) << "t = " << t;
  }
}

TEST(QuasiStaticNoise, ReproducibleFromSeedAndShot) {
  const DeviceParams p;
  for (std::uint64_t shot = 0; shot < 20; ++shot) {
    const auto a = quasistatic_noise_for_shot(p, 9, shot);
    const auto b = quasistatic_noise_for_shot(p, 9, shot);
    EXPECT_EQ(a.delta_f1, b.delta_f1);
    EXPECT_EQ(a.delta_f2, b.delta_f2);
  }
  EXPECT_NE(quasistatic_noise_for_shot(p, 9, 0).delta_f1, quasistatic_noise_for_shot(p, 9, 1).delta_f1);
}

TEST(Evolve, ZeroDriveLeavesStateUnchanged) {
  auto rng = keyed_stream(3, {tag(StreamTag::Synthetic)});
  const DensityMatrix rho = testgen::density(4, rng);
  PulseSchedule s;
  s.segments.push_back(idle_segment(200e-9));
  const DensityMatrix out = evolve(ideal(), s, {}, rho);
  EXPECT_LT((out.matrix() - rho.matrix()).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Evolve, ResonantPiPulse) {
  const DeviceParams p = ideal();
  for (int q = 0; q < 2; ++q) {
    PulseSchedule s;
    s.segments.push_back(drive_segment(p, q, 0.0, 1.0 / (2 * p.rabi(q))));
    const DensityMatrix out = evolve(p, s, {}, DensityMatrix::basis(4, 0));
    EXPECT_NEAR(up_population(out.matrix(), q), 1.0, 1e-6);
  }
}

TEST(Evolve, DetunedDriveMatchesRabiFormula) {
  const DeviceParams p = ideal();
  const double omega = p.omega1;
  for (double delta : {1e6, 3e6, 6e6}) {
    const double rate = std::hypot(omega, delta);
    PulseSchedule s;
    s.segments.push_back(Segment{1.0 / (2 * rate), {{p.f1 + delta, omega, 0.0}}});
    const DensityMatrix out = evolve(p, s, {}, DensityMatrix::basis(4, 0));
    EXPECT_NEAR(up_population(out.matrix(), 0), omega * omega / (rate * rate), 1e-3);
  }
}

TEST(Evolve, TimestepUnderflowThrows) {
  PulseSchedule s;
  s.segments.push_back(idle_segment(1e-13));
  EXPECT_THROW(evolve(ideal(), s, {}, DensityMatrix::basis(4, 0)), SpinqError);
}

TEST(Evolve, TracePreservingAndPositiveOnRandomSchedules) {
  const DeviceParams p;
  auto rng = keyed_stream(4, {tag(StreamTag::Synthetic)});
  for (int i = 0; i < 200; ++i) {
    const PulseSchedule s = testgen::schedule(p, rng);
    const DensityMatrix rho0 = testgen::density(4, rng);
    const NoiseRealization noise = sample_quasistatic_noise(p, rng);
    Mat out;
    evolve_observed(p, s, noise, rho0, {}, [&](std::size_t, const Mat& rho) { out = rho; });
    EXPECT_NEAR(out.trace().real(), 1.0, 1e-9);
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (out + out.adjoint()));
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-8);
  }
}

TEST(Evolve, DriveCrosstalkOnIdleQubitIsBounded) {
  const DeviceParams p = ideal();
  Mat target = Mat::Zero(2, 2);
  target(0, 0) = 1.0;
  const double scale = std::pow(p.omega1 / p.delta_ez(), 2);
  for (int pulses = 1; pulses <= 8; ++pulses) {
    PulseSchedule s;
    s.segments.push_back(drive_segment(p, 0, 0.0, pulses * p.t_pi2));
    const Mat r = reduced(evolve(p, s, {}, DensityMatrix::basis(4, 0)).matrix(), 1);
    // A square edge leaves a coherence of order Omega / dEz on the idle qubit;
    // its population moves on the (Omega / dEz)^2 scale.
    EXPECT_LT(r(1, 1).real(), 10 * scale);
    EXPECT_LT(std::abs(r(0, 1)), p.omega1 / p.delta_ez());

    Segment ramped = s.segments.front();
    ramped.shape = Shape::CosineRamped;
    ramped.ramp = 10e-9;
    s.segments.front() = ramped;
    const Mat rr = reduced(evolve(p, s, {}, DensityMatrix::basis(4, 0)).matrix(), 1);
    EXPECT_LT((rr - target).norm(), 1e-3);
  }
}

TEST(Evolve, HalvingTimestepConverges) {
  const DeviceParams p;
  auto rng = keyed_stream(5, {tag(StreamTag::Synthetic)});
  for (int i = 0; i < 20; ++i) {
    const PulseSchedule s = testgen::schedule(p, rng);
    EvolveOptions fine;
    fine.dt_scale = 0.5;
    const Mat a = propagate(p, s, {});
    const Mat b = propagate(p, s, {}, fine);
    EXPECT_GT(process_fidelity(a, b), 1.0 - 1e-9);
  }
}

TEST(Confusion, PerfectSpamIsIdentity) {
  EXPECT_LT((confusion_matrix(ideal()) - Matrix4d::Identity()).norm(), 1e-15);
}

TEST(Confusion, ReadoutEntryAndStochasticity) {
  const DeviceParams p;
  EXPECT_NEAR(readout_confusion(p)(0, 0), 0.981 * 0.998, 1e-12);
  for (const Matrix4d& c : {readout_confusion(p), init_confusion(p), confusion_matrix(p)}) {
    for (int col = 0; col < 4; ++col) EXPECT_NEAR(c.col(col).sum(), 1.0, 1e-12);
    EXPECT_GE(c.minCoeff(), 0.0);
  }
  EXPECT_LT((confusion_matrix(p) - readout_confusion(p) * init_confusion(p)).norm(), 1e-15);
}

TEST(Confusion, AsymmetricReadoutOverrides) {
  DeviceParams p;
  p.M1_down = 0.99;
  p.M1_up = 0.95;
  const Matrix4d c = readout_confusion(p);
  EXPECT_NEAR(c(0, 0), 0.99 * 0.998, 1e-12);
  EXPECT_NEAR(c(2, 2), 0.95 * 0.998, 1e-12);
}

TEST(MeasureWithSpam, PerfectSpamPutsAllCountsInDownDown) {
  auto rng = keyed_stream(6, {tag(StreamTag::Measurement)});
  const auto c = measure_with_spam(ideal(), DensityMatrix::basis(4, 0), 1000, rng);
  EXPECT_EQ(c[0], 1000);
  EXPECT_EQ(c.shots, 1000);
}

TEST(MeasureWithSpam, FrequenciesConcentrateAndAreDeterministic) {
  const DeviceParams p;
  auto g = keyed_stream(7, {tag(StreamTag::Synthetic)});
  for (int trial = 0; trial < 20; ++trial) {
    const DensityMatrix rho = testgen::density(4, g);
    const ProbabilityVector expect = outcome_probabilities(p, rho);
    constexpr std::int64_t kShots = 20000;
    auto r1 = keyed_stream(8, {tag(StreamTag::Measurement), static_cast<std::uint64_t>(trial)});
    auto r2 = keyed_stream(8, {tag(StreamTag::Measurement), static_cast<std::uint64_t>(trial)});
    const auto a = measure_with_spam(p, rho, kShots, r1);
    const auto b = measure_with_spam(p, rho, kShots, r2);
    EXPECT_EQ(a.n, b.n);
    EXPECT_EQ(a[0] + a[1] + a[2] + a[3], kShots);
    const ProbabilityVector f = a.frequencies();
    for (int i = 0; i < 4; ++i) {
      const double bound = 4 * std::sqrt(expect[i] * (1 - expect[i]) / kShots) + 1e-12;
      EXPECT_NEAR(f[i], expect[i], bound);
    }
  }
}

TEST(RabiChevron, OnResonanceVisibility) {
  const DeviceParams p = ideal();
  std::vector<double> taus;
  for (int i = 0; i <= 200; ++i) taus.push_back(i * 2e-9);
  const auto r = rabi_chevron(p, 0, {p.f1}, taus, {});
  const auto [lo, hi] = std::minmax_element(r.p_up[0].begin(), r.p_up[0].end());
  EXPECT_GE(*hi - *lo, 0.999);
}

TEST(RabiChevron, SymmetricInDetuning) {
  const DeviceParams p = ideal();
  std::vector<double> taus;
  for (int i = 1; i <= 60; ++i) taus.push_back(i * 5e-9);
  for (double d : {1e6, 4e6}) {
    const auto r = rabi_chevron(p, 1, {p.f2 - d, p.f2 + d}, taus, {});
    for (std::size_t k = 0; k < taus.size(); ++k) EXPECT_NEAR(r.p_up[0][k], r.p_up[1][k], 1e-6);
  }
}

TEST(RabiChevron, OscillationFrequencyIsGeneralizedRabi) {
  const DeviceParams p = ideal();
  std::vector<double> taus;
  for (int i = 0; i < 400; ++i) taus.push_back(i * 10e-9);
  for (double d : {0.0, 2e6, 5e6}) {
    const auto r = rabi_chevron(p, 0, {p.f1 + d}, taus, {});
    const double expect = std::hypot(p.omega1, d);
    EXPECT_NEAR(dominant_frequency(taus, r.p_up[0], 0.5 * expect, 1.5 * expect), expect, 0.01 * expect);
  }
}

TEST(Coherence, RamseyRecoversT2Star) {
  const DeviceParams p;
  SimulationMode m{true, 0, 2000, 11};
  for (int q = 0; q < 2; ++q) {
    std::vector<double> delays;
    for (int i = 1; i <= 40; ++i) delays.push_back(i * 2.5 * p.t2star(q) / 40);
    const auto r = coherence_experiment(p, q, CoherenceKind::Ramsey, delays, m);
    ASSERT_TRUE(r.decaying);
    EXPECT_NEAR(r.time_constant, p.t2star(q), 0.05 * p.t2star(q)) << "qubit " << q;
  }
}

TEST(Coherence, EchoRecoversT2) {
  const DeviceParams p;
  SimulationMode m{true, 0, 200, 12};
  for (int q = 0; q < 2; ++q) {
    std::vector<double> delays;
    for (int i = 1; i <= 40; ++i) delays.push_back(i * 2.5 * p.t2echo(q) / 40);
    const auto r = coherence_experiment(p, q, CoherenceKind::HahnEcho, delays, m);
    ASSERT_TRUE(r.decaying);
    EXPECT_NEAR(r.time_constant, p.t2echo(q), 0.05 * p.t2echo(q)) << "qubit " << q;
  }
}

TEST(Coherence, EchoRefocusesPureQuasiStaticNoise) {
  DeviceParams p;
  p.T2echo1 = p.T2echo2 = kInfinity;
  SimulationMode m{true, 0, 200, 13};
  std::vector<double> delays;
  for (int i = 1; i <= 30; ++i) delays.push_back(i * 0.2e-6);
  const auto r = coherence_experiment(p, 0, CoherenceKind::HahnEcho, delays, m);
  EXPECT_GE(r.time_constant, 10 * delays.back());
}

TEST(Coherence, RamseyFringeAtDetuning) {
  const DeviceParams p;
  SimulationMode m{true, 0, 300, 14};
  constexpr double kDetuning = 2e6;
  std::vector<double> delays;
  for (int i = 1; i <= 120; ++i) delays.push_back(i * 25e-9);
  CoherenceOptions o;
  o.detuning = kDetuning;
  const auto r = coherence_experiment(p, 0, CoherenceKind::Ramsey, delays, m, o);
  EXPECT_NEAR(dominant_frequency(delays, r.p_up, 1e6, 3e6), kDetuning, 0.01 * kDetuning);
}

TEST(Coherence, StandardErrorScalesWithRealizations) {
  const DeviceParams p;
  std::vector<double> delays;
  for (int i = 1; i <= 10; ++i) delays.push_back(i * 0.15e-6);
  const auto a = coherence_experiment(p, 0, CoherenceKind::Ramsey, delays, {true, 0, 400, 15});
  const auto b = coherence_experiment(p, 0, CoherenceKind::Ramsey, delays, {true, 0, 800, 15});
  double ratio = 0.0;
  for (std::size_t i = 0; i < delays.size(); ++i) ratio += a.stderr_[i] / b.stderr_[i] / delays.size();
  EXPECT_NEAR(ratio, std::sqrt(2.0), 0.2 * std::sqrt(2.0));
}

TEST(Coherence, TooFewDelaysThrows) {
  EXPECT_THROW(coherence_experiment(DeviceParams{}, 0, CoherenceKind::Ramsey, {1e-6, 2e-6}, {}), SpinqError);
}

TEST(Exchange, RamseyOscillationRecoversFiveMegahertz) {
  const DeviceParams p;
  const auto pt = measure_exchange(p, 5e6, ExchangeMode::RamseyOscillation, {true, 0, 50, 16});
  ASSERT_TRUE(pt.resolvable);
  EXPECT_NEAR(pt.j_estimate, 5e6, 0.02 * 5e6);
}

TEST(Exchange, EchoResolvesResidualExchange) {
  const DeviceParams p;
  const auto pt = measure_exchange(p, 20e3, ExchangeMode::EchoResidual, {true, 0, 50, 17});
  ASSERT_TRUE(pt.resolvable);
  EXPECT_NEAR(pt.j_estimate, 20e3, 0.1 * 20e3);
}

TEST(Exchange, ZeroExchangeIsUnresolvable) {
  const DeviceParams p;
  for (auto mode : {ExchangeMode::RamseyOscillation, ExchangeMode::EchoResidual}) {
    const auto pt = measure_exchange(p, 0.0, mode, {true, 0, 20, 18});
    EXPECT_FALSE(pt.resolvable);
    EXPECT_TRUE(std::isnan(pt.j_estimate));
  }
}

TEST(Schedule, ValidationAndDuration) {
  PulseSchedule s;
  s.segments.push_back(idle_segment(10e-9));
  s.segments.push_back(exchange_hold(1e6, 30e-9));
  EXPECT_NEAR(s.duration(), 40e-9, 1e-20);
  EXPECT_NO_THROW(s.validate());
  Segment bad = idle_segment(10e-9);
  bad.tones.resize(3);
  s.segments.push_back(bad);
  EXPECT_THROW(s.validate(), SpinqError);
  PulseSchedule z;
  z.segments.push_back(idle_segment(0.0));
  EXPECT_THROW(z.validate(), SpinqError);
}
