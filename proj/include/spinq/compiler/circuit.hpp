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

#include <string>
#include <string_view>
#include <vector>

#include "spinq/core/quantum.hpp"

namespace spinq {

enum class GateKind { I, X90, Y90, Z, CZ };

/// One native gate. Qubits are 0-based here and 1-based in text.
struct GateOp {
  GateKind kind = GateKind::I;
  int qubit = -1;      // -1 for CZ
  double angle = 0.0;  // Z only, in [0, 2 pi)

  static GateOp idle(int q) { return {GateKind::I, q, 0.0}; }
  static GateOp x90(int q) { return {GateKind::X90, q, 0.0}; }
  static GateOp y90(int q) { return {GateKind::Y90, q, 0.0}; }
  static GateOp z(int q, double angle);
  static GateOp cz() { return {GateKind::CZ, -1, 0.0}; }

  bool operator==(const GateOp&) const = default;
};

/// Wraps an angle into [0, 2 pi).
double wrap_angle(double a);

struct Circuit {
  std::string name;
  std::vector<GateOp> ops;

  Circuit& add(const GateOp& g);
  Circuit& append(const Circuit& c);
  std::size_t size() const { return ops.size(); }
  bool empty() const { return ops.empty(); }
  int cz_count() const;
  bool operator==(const Circuit&) const = default;
};

/// 2x2 (single-qubit kinds) or 4x4 (CZ) ideal matrix.
Mat gate_matrix(const GateOp& g);

/// Product of the ideal gates, first gate rightmost.
Unitary ideal_unitary(const Circuit& c);

/// Line-oriented text: `X90 1`, `Y90 2`, `I 1`, `Z 1 1.5707963`, `CZ`, and an
/// optional `NAME <text>` line. `#` starts a comment. Angles are written with
/// 17 significant digits so parse(to_text(c)) == c.
std::string to_text(const Circuit& c);
Circuit parse_circuit(std::string_view text);

const char* to_string(GateKind k);

}  // namespace spinq
