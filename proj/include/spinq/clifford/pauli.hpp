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

#include <array>
#include <cstdint>

#include "spinq/core/quantum.hpp"

namespace spinq {

/// Two-qubit Pauli i^phase * X^x Z^z, with bit q of x and z for qubit q.
struct Pauli {
  std::uint8_t x = 0;
  std::uint8_t z = 0;
  std::uint8_t phase = 0;  // power of i, mod 4

  /// Hermitian Pauli (-1)^sign * P1 (x) P2 with Y = iXZ.
  static Pauli hermitian(std::uint8_t x, std::uint8_t z, bool negative);
  /// Sign bit of a Hermitian Pauli; throws for anti-Hermitian ones.
  bool negative() const;
  bool operator==(const Pauli&) const = default;
};

Pauli operator*(const Pauli& a, const Pauli& b);
bool commute(const Pauli& a, const Pauli& b);
Mat pauli_matrix(const Pauli& p);

/// Clifford as images of the generators X1, Z1, X2, Z2 (in that order).
struct Tableau {
  std::array<Pauli, 4> image{};

  static Tableau identity();
  /// Image of an arbitrary Pauli.
  Pauli apply(const Pauli& p) const;
  /// Generator commutation relations preserved.
  bool valid() const;
  /// 20-bit key: 5 bits (x, z, sign) per image.
  std::uint32_t key() const;
  static Tableau from_key(std::uint32_t key);
  bool operator==(const Tableau&) const = default;
};

/// `second` after `first`.
Tableau compose(const Tableau& first, const Tableau& second);
Tableau inverse(const Tableau& t);

/// Conjugation action of a Clifford unitary; throws if `u` is not Clifford.
Tableau tableau_of(const Mat& u);

inline constexpr std::uint32_t kTableauKeySpace = 1u << 20;

}  // namespace spinq
