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

// Hand-rolled random inputs for the property tests. Every generator takes
// the stream explicitly so failures reproduce from the test's seed.

#include <random>
#include <vector>

#include "spinq/compiler/circuit.hpp"
#include "spinq/core/quantum.hpp"
#include "spinq/device/params.hpp"
#include "spinq/device/schedule.hpp"

namespace spinq::testgen {

inline Mat ginibre(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int k = 0; k < cols; ++k) m(i, k) = cplx(g(rng), g(rng));
  }
  return m;
}

/// Random density matrix of random rank.
inline DensityMatrix density(int dim, std::mt19937_64& rng) {
  const int rank = std::uniform_int_distribution<int>(1, dim)(rng);
  const Mat g = ginibre(dim, rank, rng);
  Mat rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(0.5 * (rho + rho.adjoint()), 1e-9);
}

/// Random CPTP map: Kraus operators cut from a random isometry.
inline Channel channel(int dim, std::mt19937_64& rng) {
  const int k = std::uniform_int_distribution<int>(1, 4)(rng);
  const Mat g = ginibre(k * dim, dim, rng);
  const Mat q = Eigen::HouseholderQR<Mat>(g).householderQ() * Mat::Identity(k * dim, dim);
  std::vector<Mat> kraus;
  for (int i = 0; i < k; ++i) kraus.push_back(q.block(i * dim, 0, dim, dim));
  return Channel(kraus);
}

inline double uniform(double lo, double hi, std::mt19937_64& rng) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Random native circuit of `n` gates; CZ only when `with_cz`.
inline Circuit circuit(int n, bool with_cz, std::mt19937_64& rng) {
  Circuit c;
  std::uniform_int_distribution<int> kind(0, with_cz ? 4 : 3);
  std::uniform_int_distribution<int> qubit(0, 1);
  for (int i = 0; i < n; ++i) {
    switch (kind(rng)) {
      case 0: c.add(GateOp::x90(qubit(rng))); break;
      case 1: c.add(GateOp::y90(qubit(rng))); break;
      case 2: c.add(GateOp::z(qubit(rng), uniform(0.0, kTwoPi, rng))); break;
      case 3: c.add(GateOp::idle(qubit(rng))); break;
      default: c.add(GateOp::cz()); break;
    }
  }
  return c;
}

/// Random schedule of 1-4 segments mixing drives, exchange and ramps.
inline PulseSchedule schedule(const DeviceParams& p, std::mt19937_64& rng) {
  PulseSchedule s;
  const int n = std::uniform_int_distribution<int>(1, 4)(rng);
  for (int i = 0; i < n; ++i) {
    Segment seg;
    seg.duration = uniform(5e-9, 80e-9, rng);
    const int tones = std::uniform_int_distribution<int>(0, 2)(rng);
    for (int t = 0; t < tones; ++t) {
      const int q = std::uniform_int_distribution<int>(0, 1)(rng);
      seg.tones.push_back({p.frequency(q) + uniform(-2e6, 2e6, rng), p.rabi(q) * uniform(0.2, 1.0, rng),
                           uniform(0.0, kTwoPi, rng)});
    }
    if (std::uniform_int_distribution<int>(0, 2)(rng) == 0) seg.exchange_override = uniform(0.0, 8e6, rng);
    if (std::uniform_int_distribution<int>(0, 1)(rng) == 0) {
      seg.shape = Shape::CosineRamped;
      seg.ramp = uniform(0.0, seg.duration / 2, rng);
    }
    s.segments.push_back(seg);
  }
  return s;
}

}  // namespace spinq::testgen
