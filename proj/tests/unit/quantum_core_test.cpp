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

#include <gtest/gtest.h>

#include "generators.hpp"
#include "spinq/core/quantum.hpp"
#include "spinq/util/rng.hpp"

using namespace spinq;

namespace {

// Monte-Carlo average of <psi|ch(|psi><psi|)|psi> over Haar states, with the
// ideal unitary undone first.
double haar_average_fidelity(const Channel& ch, const Mat& ideal, int samples, std::uint64_t seed) {
  auto rng = keyed_stream(seed, {tag(StreamTag::Synthetic)});
  double sum = 0.0;
  for (int i = 0; i < samples; ++i) {
    const Vec psi = random_pure_state(static_cast<int>(ideal.rows()), rng);
    const DensityMatrix out = apply_channel(ch, DensityMatrix::pure(psi));
    const Vec target = ideal * psi;
    sum += (target.adjoint() * out.matrix() * target)(0, 0).real();
  }
  return sum / samples;
}

}  // namespace

TEST(TensorProduct, IdentityAndBasisOrdering) {
  const Unitary id = tensor_product(Unitary::identity(2), Unitary::identity(2));
  EXPECT_LT((id.matrix() - Mat::Identity(4, 4)).norm(), 1e-15);

  const Unitary xi = tensor_product(Unitary(pauli::X()), Unitary::identity(2));
  Vec dd = Vec::Zero(4);
  dd(0) = 1.0;
  const Vec out = xi.matrix() * dd;
  EXPECT_NEAR(std::abs(out(2)), 1.0, 1e-15);  // |ud>

  const Unitary zz = tensor_product(Unitary(pauli::Z()), Unitary(pauli::Z()));
  const double expect[4] = {1, -1, -1, 1};
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(zz.matrix()(i, i).real(), expect[i], 1e-15);
}

TEST(TensorProduct, RejectsFourDimensionalInputs) {
  EXPECT_THROW(tensor_product(Unitary::identity(4), Unitary::identity(2)), SpinqError);
}

TEST(Unitary, RejectsNonUnitary) {
  Mat m = Mat::Identity(2, 2);
  m(0, 0) = 1.1;
  EXPECT_THROW(Unitary{m}, SpinqError);
}

TEST(StateFidelity, Examples) {
  const Vec phim = bell_vector(BellState::PhiMinus);
  EXPECT_NEAR(state_fidelity(DensityMatrix::pure(phim), phim), 1.0, 1e-12);
  for (auto b : {BellState::PhiPlus, BellState::PhiMinus, BellState::PsiPlus, BellState::PsiMinus}) {
    EXPECT_NEAR(state_fidelity(DensityMatrix::maximally_mixed(4), bell_vector(b)), 0.25, 1e-12);
  }
  Vec uu = Vec::Zero(4);
  uu(3) = 1.0;
  EXPECT_NEAR(state_fidelity(DensityMatrix::basis(4, 0), uu), 0.0, 1e-15);
}

TEST(StateFidelity, RejectsUnnormalizedState) {
  Vec v = Vec::Zero(4);
  v(0) = 2.0;
  EXPECT_THROW(state_fidelity(DensityMatrix::basis(4, 0), v), SpinqError);
}

TEST(StateFidelity, InUnitIntervalForRandomInputs) {
  auto rng = keyed_stream(11, {tag(StreamTag::Synthetic)});
  for (int i = 0; i < 1000; ++i) {
    const int dim = i % 2 == 0 ? 2 : 4;
    const double f = state_fidelity(testgen::density(dim, rng), random_pure_state(dim, rng));
    EXPECT_GE(f, -1e-12);
    EXPECT_LE(f, 1.0 + 1e-12);
  }
}

TEST(AverageGateFidelity, IdealChannelIsOne) {
  auto rng = keyed_stream(3, {tag(StreamTag::Synthetic)});
  const Unitary u(random_unitary(4, rng));
  EXPECT_NEAR(average_gate_fidelity(Channel::from_unitary(u), u), 1.0, 1e-12);
}

TEST(AverageGateFidelity, DepolarizingMatchesFormulaAndHaarAverage) {
  auto rng = keyed_stream(4, {tag(StreamTag::Synthetic)});
  const Unitary u(random_unitary(4, rng));
  const Channel ch = Channel::depolarizing(4, 0.01).after(Channel::from_unitary(u));
  const double f = average_gate_fidelity(ch, u);
  EXPECT_NEAR(f, 0.9925, 1e-12);
  EXPECT_NEAR(haar_average_fidelity(ch, u.matrix(), 10000, 5), f, 2e-4);
}

TEST(AverageGateFidelity, BitFlipAgainstIdentity) {
  const Channel flip({pauli::X()});
  const double f = average_gate_fidelity(flip, Unitary::identity(2));
  EXPECT_NEAR(f, 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(haar_average_fidelity(flip, Mat::Identity(2, 2), 10000, 6), 1.0 / 3.0, 1e-2);
}

TEST(AverageGateFidelity, GlobalPhaseInvariance) {
  auto rng = keyed_stream(7, {tag(StreamTag::Synthetic)});
  const Channel ch = testgen::channel(4, rng);
  const Mat u = random_unitary(4, rng);
  const double f0 = average_gate_fidelity(ch, Unitary(u));
  for (int i = 0; i < 100; ++i) {
    const double theta = testgen::uniform(0.0, kTwoPi, rng);
    EXPECT_NEAR(average_gate_fidelity(ch, Unitary(std::polar(1.0, theta) * u)), f0, 1e-10);
  }
}

TEST(AverageGateFidelity, DimensionMismatchThrows) {
  EXPECT_THROW(average_gate_fidelity(Channel::depolarizing(2, 0.1), Unitary::identity(4)), SpinqError);
}

TEST(Channel, RejectsNonTracePreservingKraus) {
  EXPECT_THROW(Channel({Mat(2.0 * Mat::Identity(2, 2))}), SpinqError);
}

TEST(ApplyChannel, Examples) {
  auto rng = keyed_stream(8, {tag(StreamTag::Synthetic)});
  const DensityMatrix rho = testgen::density(4, rng);
  const Channel id({Mat::Identity(4, 4)});
  EXPECT_LT((apply_channel(id, rho).matrix() - rho.matrix()).norm(), 1e-14);

  const DensityMatrix full = apply_channel(Channel::depolarizing(4, 1.0), rho);
  EXPECT_LT((full.matrix() - Mat::Identity(4, 4) / 4.0).norm(), 1e-14);

  Vec plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const DensityMatrix out = apply_channel(Channel::dephasing(0.5), DensityMatrix::pure(plus));
  EXPECT_LT((out.matrix() - Mat::Identity(2, 2) / 2.0).norm(), 1e-14);
}

TEST(ApplyChannel, PreservesTraceAndPositivity) {
  auto rng = keyed_stream(9, {tag(StreamTag::Synthetic)});
  for (int i = 0; i < 1000; ++i) {
    const int dim = i % 2 == 0 ? 2 : 4;
    const DensityMatrix out = apply_channel(testgen::channel(dim, rng), testgen::density(dim, rng));
    EXPECT_NEAR(out.matrix().trace().real(), 1.0, 1e-10);
    EXPECT_GE(out.min_eigenvalue(), -1e-9);
  }
}

TEST(DensityMatrix, RejectsInvalidMatrices) {
  Mat m = Mat::Identity(4, 4) / 2.0;
  EXPECT_THROW(DensityMatrix{m}, SpinqError);
  Mat neg = Mat::Zero(2, 2);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  EXPECT_THROW(DensityMatrix{neg}, SpinqError);
}

TEST(Fidelity, LabelPermutationInvariance) {
  auto rng = keyed_stream(10, {tag(StreamTag::Synthetic)});
  Mat swap = Mat::Zero(4, 4);
  swap(0, 0) = swap(3, 3) = swap(1, 2) = swap(2, 1) = 1.0;
  for (int i = 0; i < 100; ++i) {
    const DensityMatrix rho = testgen::density(4, rng);
    const Vec psi = random_pure_state(4, rng);
    const DensityMatrix swapped(swap * rho.matrix() * swap, 1e-9);
    EXPECT_NEAR(state_fidelity(rho, psi), state_fidelity(swapped, swap * psi), 1e-12);
  }
}
