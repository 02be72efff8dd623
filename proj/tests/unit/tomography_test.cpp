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

#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "spinq/compiler/calibration.hpp"
#include "spinq/tomo/tomography.hpp"
#include "spinq/util/rng.hpp"

using namespace spinq;

namespace {

constexpr BellState kBell[4] = {BellState::PhiPlus, BellState::PhiMinus, BellState::PsiPlus, BellState::PsiMinus};

void expect_valid_density(const DensityMatrix& rho) {
  EXPECT_NEAR(rho.matrix().trace().real(), 1.0, 1e-9);
  EXPECT_LT((rho.matrix() - rho.matrix().adjoint()).norm(), 1e-10);
  EXPECT_GE(rho.min_eigenvalue(), -1e-9);
}

DensityMatrix depolarized(const Vec& psi, double w) {
  return DensityMatrix((1 - w) * psi * psi.adjoint() + w * Mat::Identity(4, 4) / 4.0, 1e-9);
}

int swap_index(int i) { return ((i & 1) << 1) | (i >> 1); }

TomographyData swap_qubits(const TomographyData& d) {
  TomographyData out;
  out.shots_per_setting = d.shots_per_setting;
  for (int s = 0; s < 9; ++s) {
    const int t = 3 * (s % 3) + s / 3;
    for (int o = 0; o < 4; ++o) out.frequencies[static_cast<std::size_t>(t)].p[static_cast<std::size_t>(swap_index(o))] = d.frequencies[static_cast<std::size_t>(s)][o];
  }
  return out;
}

Mat swap_matrix() {
  Mat m = Mat::Zero(4, 4);
  for (int i = 0; i < 4; ++i) m(swap_index(i), i) = 1.0;
  return m;
}

TomographyData apply_readout(const TomographyData& d, const Matrix4d& c) {
  TomographyData out = d;
  for (int s = 0; s < 9; ++s) {
    Eigen::Vector4d v;
    for (int o = 0; o < 4; ++o) v(o) = d.frequencies[static_cast<std::size_t>(s)][o];
    const Eigen::Vector4d w = c * v;
    for (int o = 0; o < 4; ++o) out.frequencies[static_cast<std::size_t>(s)].p[static_cast<std::size_t>(o)] = w(o);
  }
  return out;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

}  // namespace

TEST(Design, NineSettingsAndRankSixteen) {
  EXPECT_EQ(tomography_settings().size(), 9u);
  const Eigen::MatrixXd d = tomography_design();
  EXPECT_EQ(d.rows(), 36);
  EXPECT_EQ(d.cols(), 16);
  EXPECT_EQ(Eigen::FullPivLU<Eigen::MatrixXd>(d).rank(), 16);
  for (int s = 0; s < 9; ++s) {
    Mat sum = Mat::Zero(4, 4);
    for (int o = 0; o < 4; ++o) sum += tomography_povm(s, o);
    EXPECT_LT((sum - Mat::Identity(4, 4)).norm(), 1e-12);
  }
  EXPECT_THROW(tomography_povm(9, 0), SpinqError);
}

TEST(BellPrep, OneCzAndIdealOutputs) {
  Vec dd = Vec::Zero(4);
  dd(0) = 1.0;
  std::vector<Vec> outs;
  for (BellState b : kBell) {
    const Circuit c = bell_prep_circuit(b);
    EXPECT_EQ(c.cz_count(), 1);
    const Vec out = ideal_unitary(c).matrix() * dd;
    EXPECT_NEAR(std::norm(bell_vector(b).dot(out)), 1.0, 1e-10) << to_string(b);
    outs.push_back(out);
  }
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t k = i + 1; k < 4; ++k) EXPECT_NEAR(std::abs(outs[i].dot(outs[k])), 0.0, 1e-10);
  }
}

TEST(SimulateTomography, GroundStateZZSetting) {
  const DeviceParams p = DeviceParams{}.noiseless();
  const auto cal = calibrate_cz(p, 5e6);
  SimulationMode m;
  m.shots = 500;
  m.seed = 3;
  const auto d = simulate_tomography(p, Circuit{}, cal, m);
  EXPECT_EQ(d.shots_per_setting, 500);
  EXPECT_NEAR(d.frequencies[0][0], 1.0, 1e-12);
  for (const auto& f : d.frequencies) EXPECT_NEAR(f.sum(), 1.0, 1e-12);
}

TEST(SimulateTomography, FrequenciesConcentrateAroundExactProbabilities) {
  const DeviceParams p;
  const auto cal = calibrate_cz(p, 5e6);
  SimulationMode exact;
  const auto truth = simulate_tomography(p, bell_prep_circuit(BellState::PsiPlus), cal, exact);
  SimulationMode sampled;
  sampled.shots = 4000;
  sampled.seed = 4;
  const auto d = simulate_tomography(p, bell_prep_circuit(BellState::PsiPlus), cal, sampled);
  const auto again = simulate_tomography(p, bell_prep_circuit(BellState::PsiPlus), cal, sampled);
  for (int s = 0; s < 9; ++s) {
    for (int o = 0; o < 4; ++o) {
      const double q = truth.frequencies[static_cast<std::size_t>(s)][o];
      EXPECT_NEAR(d.frequencies[static_cast<std::size_t>(s)][o], q, 4 * std::sqrt(q * (1 - q) / 4000) + 1e-12);
      EXPECT_EQ(d.frequencies[static_cast<std::size_t>(s)][o], again.frequencies[static_cast<std::size_t>(s)][o]);
    }
  }
}

TEST(LinearInversion, ExactDataRecoversState) {
  auto rng = keyed_stream(1, {tag(StreamTag::Tomography)});
  for (int i = 0; i < 50; ++i) {
    const DensityMatrix rho = testgen::density(4, rng);
    const auto li = linear_inversion(ideal_tomography_data(rho));
    EXPECT_LT((li.rho - rho.matrix()).norm(), 1e-10);
  }
}

TEST(LinearInversion, FiniteCountsOfPureStatesAreOftenNonPsd) {
  auto rng = keyed_stream(2, {tag(StreamTag::Tomography)});
  int flagged = 0;
  for (int i = 0; i < 50; ++i) {
    const DensityMatrix rho = DensityMatrix::pure(random_pure_state(4, rng));
    const auto li = linear_inversion(sample_tomography_data(rho, 1000, rng));
    EXPECT_NEAR(li.rho.trace().real(), 1.0, 1e-12);
    EXPECT_LT((li.rho - li.rho.adjoint()).norm(), 1e-12);
    EXPECT_EQ(li.non_psd, li.min_eigenvalue < 0.0);
    flagged += li.non_psd ? 1 : 0;
  }
  EXPECT_GT(flagged, 25);
}

TEST(LinearInversion, MaximallyMixedInput) {
  auto rng = keyed_stream(3, {tag(StreamTag::Tomography)});
  const auto li = linear_inversion(sample_tomography_data(DensityMatrix::maximally_mixed(4), 10000, rng));
  EXPECT_LT((li.rho - Mat::Identity(4, 4) / 4.0).cwiseAbs().maxCoeff(), 0.02);
}

TEST(Mle, ExactDataReconstructsTruth) {
  auto rng = keyed_stream(4, {tag(StreamTag::Tomography)});
  for (int i = 0; i < 50; ++i) {
    const Vec psi = random_pure_state(4, rng);
    const auto r = mle_reconstruct(ideal_tomography_data(DensityMatrix::pure(psi)));
    EXPECT_GE(state_fidelity(r.rho, psi), 1 - 1e-6);
    expect_valid_density(r.rho);
  }
}

TEST(Mle, SampledDataMeanFidelity) {
  auto rng = keyed_stream(5, {tag(StreamTag::Tomography)});
  double mean = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Vec psi = random_pure_state(4, rng);
    const auto r = mle_reconstruct(sample_tomography_data(DensityMatrix::pure(psi), 10000, rng));
    mean += state_fidelity(r.rho, psi) / 50;
  }
  EXPECT_GE(mean, 0.99);
}

TEST(Mle, LikelihoodIsMonotone) {
  auto rng = keyed_stream(6, {tag(StreamTag::Tomography)});
  MLEOptions o;
  o.record_trace = true;
  for (int i = 0; i < 20; ++i) {
    const DensityMatrix rho = testgen::density(4, rng);
    const auto data = sample_tomography_data(rho, 1000, rng);
    const auto r = mle_reconstruct(data, o);
    ASSERT_FALSE(r.trace.empty());
    for (std::size_t k = 1; k < r.trace.size(); ++k) EXPECT_GE(r.trace[k], r.trace[k - 1]);
    EXPECT_NEAR(r.log_likelihood, tomography_log_likelihood(r.rho.matrix(), data), 1e-9 * std::abs(r.log_likelihood));
  }
}

TEST(Mle, AlwaysValidOnAdversarialInput) {
  auto rng = keyed_stream(7, {tag(StreamTag::Tomography)});
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 40; ++i) {
    TomographyData d;
    d.shots_per_setting = 100;
    for (auto& f : d.frequencies) {
      if (i % 2 == 0) {
        // One outcome only: inconsistent with any single state across settings.
        f.p = {0, 0, 0, 0};
        f.p[static_cast<std::size_t>(std::uniform_int_distribution<int>(0, 3)(rng))] = 1.0;
      } else {
        for (double& v : f.p) v = u(rng);
        const double s = f.sum();
        for (double& v : f.p) v /= s;
      }
    }
    const auto r = mle_reconstruct(d);
    expect_valid_density(r.rho);
  }
}

TEST(Mle, IterationCapClearsConvergedFlag) {
  auto rng = keyed_stream(8, {tag(StreamTag::Tomography)});
  MLEOptions o;
  o.max_iterations = 1;
  const auto r = mle_reconstruct(sample_tomography_data(testgen::density(4, rng), 1000, rng), o);
  EXPECT_FALSE(r.converged);
  expect_valid_density(r.rho);
}

TEST(Mle, ErrorShrinksWithShots) {
  auto rng = keyed_stream(9, {tag(StreamTag::Tomography)});
  std::vector<double> lo, hi;
  for (int i = 0; i < 20; ++i) {
    const DensityMatrix rho = DensityMatrix::pure(random_pure_state(4, rng));
    lo.push_back(trace_distance(mle_reconstruct(sample_tomography_data(rho, 1000, rng)).rho.matrix(), rho.matrix()));
    hi.push_back(trace_distance(mle_reconstruct(sample_tomography_data(rho, 10000, rng)).rho.matrix(), rho.matrix()));
  }
  EXPECT_LT(median(hi), median(lo));
}

TEST(Mle, AgreesWithPsdLinearInversion) {
  auto rng = keyed_stream(10, {tag(StreamTag::Tomography)});
  int compared = 0;
  for (int i = 0; i < 30; ++i) {
    const DensityMatrix rho = depolarized(random_pure_state(4, rng), 0.3);
    const auto data = sample_tomography_data(rho, 10000, rng);
    const auto li = linear_inversion(data);
    if (li.non_psd) continue;
    ++compared;
    EXPECT_LT(trace_distance(li.rho, mle_reconstruct(data).rho.matrix()), 0.02);
  }
  EXPECT_GT(compared, 10);
}

TEST(Mle, QubitRelabellingInvariance) {
  auto rng = keyed_stream(11, {tag(StreamTag::Tomography)});
  const Mat sw = swap_matrix();
  for (int i = 0; i < 10; ++i) {
    const Vec psi = random_pure_state(4, rng);
    const auto data = sample_tomography_data(DensityMatrix::pure(psi), 2000, rng);
    const auto a = mle_reconstruct(data);
    const auto b = mle_reconstruct(swap_qubits(data));
    EXPECT_NEAR(state_fidelity(a.rho, psi), state_fidelity(b.rho, sw * psi), 1e-6);
    EXPECT_LT((sw * a.rho.matrix() * sw - b.rho.matrix()).norm(), 1e-4);
  }
}

TEST(SpamCorrect, IdentityIsNoOp) {
  auto rng = keyed_stream(12, {tag(StreamTag::Tomography)});
  const auto d = sample_tomography_data(testgen::density(4, rng), 500, rng);
  const auto c = spam_correct(d, Matrix4d::Identity());
  EXPECT_FALSE(c.clipped);
  for (int s = 0; s < 9; ++s) {
    for (int o = 0; o < 4; ++o) {
      EXPECT_NEAR(c.data.frequencies[static_cast<std::size_t>(s)][o], d.frequencies[static_cast<std::size_t>(s)][o], 1e-15);
    }
  }
}

TEST(SpamCorrect, InvertsConfusion) {
  auto rng = keyed_stream(13, {tag(StreamTag::Tomography)});
  const Matrix4d c = readout_confusion(DeviceParams{});
  for (int i = 0; i < 20; ++i) {
    const auto d = ideal_tomography_data(testgen::density(4, rng));
    const auto back = spam_correct(apply_readout(d, c), c);
    for (int s = 0; s < 9; ++s) {
      for (int o = 0; o < 4; ++o) {
        EXPECT_NEAR(back.data.frequencies[static_cast<std::size_t>(s)][o], d.frequencies[static_cast<std::size_t>(s)][o], 1e-10);
      }
    }
  }
}

TEST(SpamCorrect, ClipsNegativesAndRejectsSingularConfusion) {
  TomographyData d;
  d.shots_per_setting = 100;
  for (auto& f : d.frequencies) f.p = {1.0, 0.0, 0.0, 0.0};
  const auto c = spam_correct(d, readout_confusion(DeviceParams{}));
  EXPECT_TRUE(c.clipped);
  for (const auto& f : c.data.frequencies) {
    EXPECT_NEAR(f.sum(), 1.0, 1e-12);
    for (double v : f.p) EXPECT_GE(v, 0.0);
  }
  DeviceParams bad;
  bad.M1 = 0.5;
  EXPECT_THROW(spam_correct(d, readout_confusion(bad)), SpinqError);
}

TEST(Reconstruct, CorrectionRaisesFidelityUnderReadoutError) {
  const DeviceParams p;
  const Matrix4d c = readout_confusion(p);
  int improved = 0;
  constexpr int kSeeds = 40;
  for (int seed = 0; seed < kSeeds; ++seed) {
    auto rng = keyed_stream(static_cast<std::uint64_t>(seed), {tag(StreamTag::Tomography)});
    const DensityMatrix rho = depolarized(bell_vector(BellState::PhiMinus), 0.05);
    // Readout applied to the exact probabilities, then sampled.
    TomographyData exact = apply_readout(ideal_tomography_data(rho), c);
    TomographyData d;
    d.shots_per_setting = 1000;
    for (int s = 0; s < 9; ++s) {
      const auto counts = sample_counts(exact.frequencies[static_cast<std::size_t>(s)], 1000, rng);
      d.frequencies[static_cast<std::size_t>(s)] = counts.frequencies();
    }
    const auto r = reconstruct(d, BellState::PhiMinus, c);
    expect_valid_density(r.raw.rho);
    expect_valid_density(r.corrected.rho);
    improved += r.fidelity_corrected >= r.fidelity_raw ? 1 : 0;
  }
  EXPECT_GE(improved, 0.95 * kSeeds);
}

TEST(BellTomography, NoiselessFidelityIsOne) {
  const DeviceParams p = DeviceParams{}.noiseless();
  const auto cal = calibrate_cz(p, 5e6);
  for (BellState b : kBell) {
    const auto r = bell_tomography(p, b, cal, SimulationMode{});
    EXPECT_NEAR(r.fidelity_raw, 1.0, 1e-6) << to_string(b);
    EXPECT_NEAR(r.fidelity_corrected, 1.0, 1e-6) << to_string(b);
  }
}
