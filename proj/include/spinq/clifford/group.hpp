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

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "spinq/clifford/pauli.hpp"
#include "spinq/compiler/circuit.hpp"

namespace spinq {

enum class CliffordClass : std::uint8_t { SingleQubit = 0, CnotLike = 1, IswapLike = 2, SwapLike = 3 };

const char* to_string(CliffordClass c);

struct CliffordElement {
  std::uint32_t id = 0;
  CliffordClass cls = CliffordClass::SingleQubit;
  Tableau tableau;
  Circuit decomposition;
  Mat unitary;  // ideal unitary of the decomposition
};

/// Single-qubit Clifford on qubit 0 with a native decomposition of at most
/// two physical pulses.
struct SingleQubitClifford {
  Tableau tableau;  // acting on qubit 0
  std::vector<GateOp> ops;
};

/// The 24 single-qubit Cliffords; index 0 is the identity.
const std::vector<SingleQubitClifford>& single_qubit_cliffords();
std::vector<SingleQubitClifford> build_single_qubit_cliffords();

class CliffordTable {
 public:
  CliffordTable() = default;

  std::size_t size() const { return elements_.size(); }
  const CliffordElement& operator[](std::size_t i) const { return elements_[i]; }
  const std::vector<CliffordElement>& elements() const { return elements_; }

  /// Index of a tableau; throws when absent.
  std::uint32_t index_of(const Tableau& t) const;
  bool contains(const Tableau& t) const;
  std::uint32_t identity() const { return identity_; }

  /// `second` after `first`.
  std::uint32_t compose(std::uint32_t first, std::uint32_t second) const;
  std::uint32_t invert(std::uint32_t a) const;
  const Circuit& decompose(std::uint32_t a) const { return elements_.at(a).decomposition; }
  std::uint32_t sample(std::mt19937_64& rng) const;

  std::size_t count(CliffordClass c) const;

  /// Builds the table from element circuits (used by build and by the cache).
  static CliffordTable from_elements(std::vector<CliffordElement> elements);

 private:
  std::vector<CliffordElement> elements_;
  std::vector<std::int32_t> lookup_;
  std::vector<std::uint32_t> inverse_;
  std::uint32_t identity_ = 0;
};

/// The full 11520-element two-qubit Clifford group.
CliffordTable build_two_qubit_cliffords();

/// Process-wide table, built on first use.
const CliffordTable& clifford_table();

/// Tableau of a native circuit (Z angles must be multiples of pi/2).
Tableau circuit_tableau(const Circuit& c);

/// Loads a cached table from `path` when its format version matches,
/// otherwise builds and (best effort) writes the cache.
CliffordTable load_or_build_cliffords(const std::string& path);
void save_cliffords(const CliffordTable& t, const std::string& path);
/// Empty optional-like result signalled by a table of size 0.
CliffordTable load_cliffords(const std::string& path);

inline constexpr std::uint32_t kCliffordCacheVersion = 1;

}  // namespace spinq
