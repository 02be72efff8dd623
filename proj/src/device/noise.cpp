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

#include "spinq/device/evolve.hpp"
#include "spinq/util/rng.hpp"

namespace spinq {

double quasistatic_sigma(double t2star) {
  if (!std::isfinite(t2star)) return 0.0;
  return 1.0 / (std::sqrt(2.0) * kPi * t2star);
}

NoiseRealization sample_quasistatic_noise(const DeviceParams& p, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  NoiseRealization r;
  // Both draws are always consumed so stream positions do not depend on T2*.
  const double z1 = n(rng);
  const double z2 = n(rng);
  r.delta_f1 = quasistatic_sigma(p.T2star1) * z1;
  r.delta_f2 = quasistatic_sigma(p.T2star2) * z2;
  return r;
}

NoiseRealization quasistatic_noise_for_shot(const DeviceParams& p, std::uint64_t seed,
                                            std::uint64_t shot) {
  auto rng = keyed_stream(seed, {tag(StreamTag::QuasiStatic), shot});
  return sample_quasistatic_noise(p, rng);
}

}  // namespace spinq
