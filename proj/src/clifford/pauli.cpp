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

#include "spinq/clifford/pauli.hpp"

#include <bit>
#include <cmath>

namespace spinq {

namespace {

int popcount(unsigned v) { return std::popcount(v); }

// Generator order X1, Z1, X2, Z2.
Pauli generator(int k) {
  const std::uint8_t bit = static_cast<std::uint8_t>(1u << (k / 2));
  return k % 2 == 0 ? Pauli{bit, 0, 0} : Pauli{0, bit, 0};
}

}  // namespace

Pauli Pauli::hermitian(std::uint8_t x, std::uint8_t z, bool neg) {
  return {x, z, static_cast<std::uint8_t>((popcount(x & z) + (neg ? 2 : 0)) % 4)};
}

bool Pauli::negative() const {
  const int rel = (phase - popcount(x & z) + 8) % 4;
  if (rel % 2 != 0) throw SpinqError("Pauli is not Hermitian");
  return rel == 2;
}

Pauli operator*(const Pauli& a, const Pauli& b) {
  // X^x1 Z^z1 X^x2 Z^z2 = (-1)^{z1.x2} X^{x1^x2} Z^{z1^z2}
  const int sign = popcount(a.z & b.x) % 2;
  return {static_cast<std::uint8_t>(a.x ^ b.x), static_cast<std::uint8_t>(a.z ^ b.z),
          static_cast<std::uint8_t>((a.phase + b.phase + 2 * sign) % 4)};
}

bool commute(const Pauli& a, const Pauli& b) { return (popcount(a.x & b.z) + popcount(a.z & b.x)) % 2 == 0; }

Mat pauli_matrix(const Pauli& p) {
  auto single = [&](int q) -> Mat {
    const bool x = (p.x >> q) & 1;
    const bool z = (p.z >> q) & 1;
    Mat m = pauli::I2();
    if (x) m = pauli::X() * m;
    if (z) m = m * pauli::Z();
    return m;
  };
  const cplx ph = std::pow(cplx(0, 1), static_cast<int>(p.phase));
  return ph * kron(single(0), single(1));
}

Tableau Tableau::identity() {
  Tableau t;
  for (int k = 0; k < 4; ++k) t.image[static_cast<std::size_t>(k)] = generator(k);
  return t;
}

Pauli Tableau::apply(const Pauli& p) const {
  Pauli out{0, 0, p.phase};
  for (int q = 0; q < 2; ++q) {
    if ((p.x >> q) & 1) out = out * image[static_cast<std::size_t>(2 * q)];
    if ((p.z >> q) & 1) out = out * image[static_cast<std::size_t>(2 * q + 1)];
  }
  return out;
}

bool Tableau::valid() const {
  for (int a = 0; a < 4; ++a) {
    for (int b = a + 1; b < 4; ++b) {
      const bool want = commute(generator(a), generator(b));
      if (commute(image[static_cast<std::size_t>(a)], image[static_cast<std::size_t>(b)]) != want) return false;
    }
    const auto& im = image[static_cast<std::size_t>(a)];
    if ((im.x | im.z) == 0) return false;
    if ((im.phase - popcount(im.x & im.z) + 8) % 2 != 0) return false;
  }
  return true;
}

std::uint32_t Tableau::key() const {
  std::uint32_t k = 0;
  for (int i = 0; i < 4; ++i) {
    const auto& p = image[static_cast<std::size_t>(i)];
    const std::uint32_t bits = (p.x & 3u) | ((p.z & 3u) << 2) | ((p.negative() ? 1u : 0u) << 4);
    k |= bits << (5 * i);
  }
  return k;
}

Tableau Tableau::from_key(std::uint32_t key) {
  Tableau t;
  for (int i = 0; i < 4; ++i) {
    const std::uint32_t bits = (key >> (5 * i)) & 31u;
    t.image[static_cast<std::size_t>(i)] =
        Pauli::hermitian(static_cast<std::uint8_t>(bits & 3u), static_cast<std::uint8_t>((bits >> 2) & 3u), (bits >> 4) & 1u);
  }
  return t;
}

Tableau compose(const Tableau& first, const Tableau& second) {
  Tableau t;
  for (std::size_t k = 0; k < 4; ++k) t.image[k] = second.apply(first.image[k]);
  return t;
}

Tableau inverse(const Tableau& t) {
  // Solve t(P_k) = g_k for each generator g_k by searching the 15 non-trivial
  // Pauli supports; the sign then follows from one application.
  Tableau inv;
  for (int k = 0; k < 4; ++k) {
    const Pauli g = generator(k);
    bool found = false;
    for (std::uint8_t s = 1; s < 16 && !found; ++s) {
      const Pauli cand = Pauli::hermitian(s & 3u, (s >> 2) & 3u, false);
      const Pauli img = t.apply(cand);
      if (img.x != g.x || img.z != g.z) continue;
      inv.image[static_cast<std::size_t>(k)] = img.phase == g.phase ? cand : Pauli::hermitian(cand.x, cand.z, true);
      found = true;
    }
    if (!found) throw SpinqError("tableau is not invertible");
  }
  return inv;
}

Tableau tableau_of(const Mat& u) {
  if (u.rows() != 4 || u.cols() != 4) throw SpinqError("tableau_of needs a 4x4 unitary");
  Tableau t;
  for (int k = 0; k < 4; ++k) {
    const Mat m = u * pauli_matrix(generator(k)) * u.adjoint();
    bool found = false;
    for (std::uint8_t s = 1; s < 16 && !found; ++s) {
      const Pauli cand = Pauli::hermitian(s & 3u, (s >> 2) & 3u, false);
      const cplx ov = (pauli_matrix(cand).adjoint() * m).trace() / 4.0;
      if (std::abs(std::abs(ov) - 1.0) > 1e-8) continue;
      if (std::abs(ov.imag()) > 1e-8) throw SpinqError("unitary is not Clifford");
      t.image[static_cast<std::size_t>(k)] = ov.real() > 0 ? cand : Pauli::hermitian(cand.x, cand.z, true);
      found = true;
    }
    if (!found) throw SpinqError("unitary is not Clifford");
  }
  return t;
}

}  // namespace spinq
