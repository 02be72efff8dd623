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

CMat4 CMat4::zero() {
  CMat4 m;
  for (int k = 0; k < 16; ++k) {
    m.re[k] = 0.0;
    m.im[k] = 0.0;
  }
  return m;
}

CMat4 CMat4::identity() {
  CMat4 m = zero();
  for (int k = 0; k < 4; ++k) m.re[5 * k] = 1.0;
  return m;
}

CMat4 adjoint(const CMat4& m) {
  CMat4 out;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      out.re[4 * r + c] = m.re[4 * c + r];
      out.im[4 * r + c] = -m.im[4 * c + r];
    }
  }
  return out;
}

namespace {

void mul_scalar(const CMat4& a, const CMat4& b, CMat4& out) {
  CMat4 tmp;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      double sr = 0.0;
      double si = 0.0;
      for (int k = 0; k < 4; ++k) {
        const double ar = a.re[4 * i + k];
        const double ai = a.im[4 * i + k];
        const double br = b.re[4 * k + j];
        const double bi = b.im[4 * k + j];
        sr += ar * br - ai * bi;
        si += ar * bi + ai * br;
      }
      tmp.re[4 * i + j] = sr;
      tmp.im[4 * i + j] = si;
    }
  }
  out = tmp;
}

void axpy_scalar(double alpha_re, double alpha_im, const CMat4& x, CMat4& y) {
  for (int k = 0; k < 16; ++k) {
    const double xr = x.re[k];
    const double xi = x.im[k];
    y.re[k] += alpha_re * xr - alpha_im * xi;
    y.im[k] += alpha_re * xi + alpha_im * xr;
  }
}

void scale_entries_scalar(const double* mask, CMat4& m) {
  for (int k = 0; k < 16; ++k) {
    m.re[k] *= mask[k];
    m.im[k] *= mask[k];
  }
}

double norm_inf_scalar(const CMat4& m) {
  double best = 0.0;
  for (int r = 0; r < 4; ++r) {
    double s = 0.0;
    for (int c = 0; c < 4; ++c) s += std::hypot(m.re[4 * r + c], m.im[4 * r + c]);
    best = std::max(best, s);
  }
  return best;
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar", &mul_scalar, &axpy_scalar, &scale_entries_scalar,
                                 &norm_inf_scalar};
  return table;
}

}  // namespace spinq::kernels
