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

#include <complex>
#include <string_view>

namespace spinq::kernels {

/// Dense 4x4 complex matrix, row-major, stored as split real/imaginary
/// planes so that one row of either plane fills a 256-bit register.
struct alignas(32) CMat4 {
  double re[16];
  double im[16];

  static CMat4 zero();
  static CMat4 identity();

  std::complex<double> operator()(int r, int c) const { return {re[4 * r + c], im[4 * r + c]}; }
  void set(int r, int c, std::complex<double> v) {
    re[4 * r + c] = v.real();
    im[4 * r + c] = v.imag();
  }
  void add(int r, int c, std::complex<double> v) {
    re[4 * r + c] += v.real();
    im[4 * r + c] += v.imag();
  }
};

CMat4 adjoint(const CMat4& m);

/// Function table for the hot inner loops of the propagator. Every variant
/// must agree with the scalar reference to rounding (see kernels_test).
struct KernelTable {
  const char* name;
  /// out = a * b
  void (*mul)(const CMat4& a, const CMat4& b, CMat4& out);
  /// y += (alpha_re + i alpha_im) * x
  void (*axpy)(double alpha_re, double alpha_im, const CMat4& x, CMat4& y);
  /// m[k] *= mask[k] for all 16 entries (real mask)
  void (*scale_entries)(const double* mask, CMat4& m);
  /// max_r sum_c |m(r, c)|
  double (*norm_inf)(const CMat4& m);
};

const KernelTable& scalar_kernels();

/// Returns nullptr when the AVX2 variant is not compiled in or the CPU
/// lacks AVX2/FMA.
const KernelTable* avx2_kernels();

/// Kernel table used by the simulator. Chosen once on first use: the best
/// supported variant, or the one named by the SPINQ_KERNELS environment
/// variable ("scalar" or "avx2").
const KernelTable& active();

/// Overrides the active table. Accepts "scalar", "avx2" or "auto".
/// Throws std::invalid_argument for unknown or unsupported names.
void select(std::string_view name);

/// exp(-i * H) for Hermitian H via scaled Taylor series and squaring.
CMat4 expm_minus_i(const CMat4& h, const KernelTable& k = active());

/// out = u * m * u^dagger
void sandwich(const CMat4& u, const CMat4& m, CMat4& out, const KernelTable& k = active());

}  // namespace spinq::kernels
