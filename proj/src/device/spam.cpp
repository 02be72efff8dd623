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

#include "spinq/device/spam.hpp"

#include <algorithm>

#include <unsupported/Eigen/KroneckerProduct>

namespace spinq {

ProbabilityVector MeasurementCounts::frequencies() const {
  ProbabilityVector out;
  if (shots <= 0) return out;
  for (std::size_t i = 0; i < 4; ++i) out.p[i] = static_cast<double>(n[i]) / static_cast<double>(shots);
  return out;
}

namespace {

Eigen::Matrix2d readout_single(const DeviceParams& p, int q) {
  const double md = p.readout_down(q);
  const double mu = p.readout_up(q);
  Eigen::Matrix2d c;
  c << md, 1.0 - mu, 1.0 - md, mu;
  return c;
}

Eigen::Matrix2d init_single(const DeviceParams& p, int q) {
  const double r = p.init_fidelity(q);
  Eigen::Matrix2d c;
  c << r, 1.0 - r, 1.0 - r, r;
  return c;
}

}  // namespace

Matrix4d readout_confusion(const DeviceParams& p) {
  return Eigen::kroneckerProduct(readout_single(p, 0), readout_single(p, 1)).eval();
}

Matrix4d init_confusion(const DeviceParams& p) {
  return Eigen::kroneckerProduct(init_single(p, 0), init_single(p, 1)).eval();
}

Matrix4d confusion_matrix(const DeviceParams& p) { return readout_confusion(p) * init_confusion(p); }

DensityMatrix initial_state(const DeviceParams& p) {
  Mat rho = Mat::Zero(4, 4);
  const double a = p.rho01;
  const double b = p.rho02;
  rho(0, 0) = a * b;
  rho(1, 1) = a * (1.0 - b);
  rho(2, 2) = (1.0 - a) * b;
  rho(3, 3) = (1.0 - a) * (1.0 - b);
  return DensityMatrix(std::move(rho));
}

ProbabilityVector outcome_probabilities(const DeviceParams& p, const DensityMatrix& rho) {
  Eigen::Vector4d diag;
  for (int i = 0; i < 4; ++i) diag(i) = std::max(0.0, rho.matrix()(i, i).real());
  diag /= diag.sum();
  const Eigen::Vector4d obs = readout_confusion(p) * diag;
  ProbabilityVector out;
  for (int i = 0; i < 4; ++i) out.p[static_cast<std::size_t>(i)] = obs(i);
  return out;
}

MeasurementCounts sample_counts(const ProbabilityVector& probs, std::int64_t shots, std::mt19937_64& rng) {
  MeasurementCounts c;
  c.shots = shots;
  std::int64_t remaining = shots;
  double mass = 1.0;
  for (std::size_t i = 0; i < 3; ++i) {
    if (remaining <= 0) break;
    const double q = mass > 0.0 ? std::clamp(probs.p[i] / mass, 0.0, 1.0) : 0.0;
    std::binomial_distribution<std::int64_t> bin(remaining, q);
    c.n[i] = bin(rng);
    remaining -= c.n[i];
    mass -= probs.p[i];
  }
  c.n[3] = remaining;
  return c;
}

MeasurementCounts measure_with_spam(const DeviceParams& p, const DensityMatrix& rho, std::int64_t shots,
                                    std::mt19937_64& rng) {
  if (shots < 1) throw SpinqError("shots must be >= 1");
  return sample_counts(outcome_probabilities(p, rho), shots, rng);
}

double marginal_up(const ProbabilityVector& probs, int qubit) {
  return qubit == 0 ? probs.p[2] + probs.p[3] : probs.p[1] + probs.p[3];
}

}  // namespace spinq
