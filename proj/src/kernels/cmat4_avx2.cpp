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

#include "spinq/kernels/cmat4.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define SPINQ_HAVE_AVX2_VARIANT 1
#include <immintrin.h>
#else
#define SPINQ_HAVE_AVX2_VARIANT 0
#endif

namespace spinq::kernels {

#if SPINQ_HAVE_AVX2_VARIANT

namespace {

#define SPINQ_AVX2 __attribute__((target("avx2,fma")))

SPINQ_AVX2 void mul_avx2(const CMat4& a, const CMat4& b, CMat4& out) {
  const __m256d br0 = _mm256_load_pd(b.re + 0);
  const __m256d br1 = _mm256_load_pd(b.re + 4);
  const __m256d br2 = _mm256_load_pd(b.re + 8);
  const __m256d br3 = _mm256_load_pd(b.re + 12);
  const __m256d bi0 = _mm256_load_pd(b.im + 0);
  const __m256d bi1 = _mm256_load_pd(b.im + 4);
  const __m256d bi2 = _mm256_load_pd(b.im + 8);
  const __m256d bi3 = _mm256_load_pd(b.im + 12);
  __m256d rows_re[4];
  __m256d rows_im[4];
  for (int i = 0; i < 4; ++i) {
    const double* ar = a.re + 4 * i;
    const double* ai = a.im + 4 * i;
    __m256d a0r = _mm256_broadcast_sd(ar + 0), a0i = _mm256_broadcast_sd(ai + 0);
    __m256d a1r = _mm256_broadcast_sd(ar + 1), a1i = _mm256_broadcast_sd(ai + 1);
    __m256d a2r = _mm256_broadcast_sd(ar + 2), a2i = _mm256_broadcast_sd(ai + 2);
    __m256d a3r = _mm256_broadcast_sd(ar + 3), a3i = _mm256_broadcast_sd(ai + 3);

    __m256d sr = _mm256_mul_pd(a0r, br0);
    sr = _mm256_fnmadd_pd(a0i, bi0, sr);
    sr = _mm256_fmadd_pd(a1r, br1, sr);
    sr = _mm256_fnmadd_pd(a1i, bi1, sr);
    sr = _mm256_fmadd_pd(a2r, br2, sr);
    sr = _mm256_fnmadd_pd(a2i, bi2, sr);
    sr = _mm256_fmadd_pd(a3r, br3, sr);
    sr = _mm256_fnmadd_pd(a3i, bi3, sr);

    __m256d si = _mm256_mul_pd(a0r, bi0);
    si = _mm256_fmadd_pd(a0i, br0, si);
    si = _mm256_fmadd_pd(a1r, bi1, si);
    si = _mm256_fmadd_pd(a1i, br1, si);
    si = _mm256_fmadd_pd(a2r, bi2, si);
    si = _mm256_fmadd_pd(a2i, br2, si);
    si = _mm256_fmadd_pd(a3r, bi3, si);
    si = _mm256_fmadd_pd(a3i, br3, si);
    rows_re[i] = sr;
    rows_im[i] = si;
  }
  // a and out may alias, so stores happen after all loads
  for (int i = 0; i < 4; ++i) {
    _mm256_store_pd(out.re + 4 * i, rows_re[i]);
    _mm256_store_pd(out.im + 4 * i, rows_im[i]);
  }
}

SPINQ_AVX2 void axpy_avx2(double alpha_re, double alpha_im, const CMat4& x, CMat4& y) {
  const __m256d ar = _mm256_set1_pd(alpha_re);
  const __m256d ai = _mm256_set1_pd(alpha_im);
  for (int k = 0; k < 16; k += 4) {
    const __m256d xr = _mm256_load_pd(x.re + k);
    const __m256d xi = _mm256_load_pd(x.im + k);
    __m256d yr = _mm256_load_pd(y.re + k);
    __m256d yi = _mm256_load_pd(y.im + k);
    yr = _mm256_fmadd_pd(ar, xr, yr);
    yr = _mm256_fnmadd_pd(ai, xi, yr);
    yi = _mm256_fmadd_pd(ar, xi, yi);
    yi = _mm256_fmadd_pd(ai, xr, yi);
    _mm256_store_pd(y.re + k, yr);
    _mm256_store_pd(y.im + k, yi);
  }
}

SPINQ_AVX2 void scale_entries_avx2(const double* mask, CMat4& m) {
  for (int k = 0; k < 16; k += 4) {
    const __m256d s = _mm256_loadu_pd(mask + k);
    _mm256_store_pd(m.re + k, _mm256_mul_pd(s, _mm256_load_pd(m.re + k)));
    _mm256_store_pd(m.im + k, _mm256_mul_pd(s, _mm256_load_pd(m.im + k)));
  }
}

SPINQ_AVX2 double norm_inf_avx2(const CMat4& m) {
  // Column-major accumulation: lane r of acc holds row r's sum.
  __m256d acc = _mm256_setzero_pd();
  for (int c = 0; c < 4; ++c) {
    const __m256d re = _mm256_set_pd(m.re[12 + c], m.re[8 + c], m.re[4 + c], m.re[c]);
    const __m256d im = _mm256_set_pd(m.im[12 + c], m.im[8 + c], m.im[4 + c], m.im[c]);
    const __m256d sq = _mm256_fmadd_pd(re, re, _mm256_mul_pd(im, im));
    acc = _mm256_add_pd(acc, _mm256_sqrt_pd(sq));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double best = lanes[0];
  for (int r = 1; r < 4; ++r) best = lanes[r] > best ? lanes[r] : best;
  return best;
}

#undef SPINQ_AVX2

}  // namespace

const KernelTable* avx2_kernels() {
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  static const KernelTable table{"avx2", &mul_avx2, &axpy_avx2, &scale_entries_avx2, &norm_inf_avx2};
  return supported ? &table : nullptr;
}

#else

const KernelTable* avx2_kernels() { return nullptr; }

#endif

}  // namespace spinq::kernels
