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

#include "spinq/kernels/cmat4.hpp"

namespace spinq::kernels {

CMat4 expm_minus_i(const CMat4& h, const KernelTable& k) {
  // A = -i H, scaled by 2^-s so the Taylor series converges in a few terms.
  CMat4 a;
  for (int e = 0; e < 16; ++e) {
    a.re[e] = h.im[e];
    a.im[e] = -h.re[e];
  }
  const double norm = k.norm_inf(a);
  int squarings = 0;
  double scale = 1.0;
  while (norm * scale > 0.5) {
    scale *= 0.5;
    ++squarings;
  }

  CMat4 result = CMat4::identity();
  CMat4 term = CMat4::identity();
  CMat4 tmp;
  double term_bound = 1.0;
  for (int order = 1; order <= 24; ++order) {
    k.mul(term, a, tmp);
    term = CMat4::zero();
    k.axpy(scale / order, 0.0, tmp, term);
    k.axpy(1.0, 0.0, term, result);
    term_bound *= norm * scale / order;
    if (term_bound < 1e-18) break;
  }
  for (int s = 0; s < squarings; ++s) k.mul(result, result, result);
  return result;
}

void sandwich(const CMat4& u, const CMat4& m, CMat4& out, const KernelTable& k) {
  CMat4 tmp;
  k.mul(u, m, tmp);
  k.mul(tmp, adjoint(u), out);
}

}  // namespace spinq::kernels
