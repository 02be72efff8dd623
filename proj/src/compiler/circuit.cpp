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

#include "spinq/compiler/circuit.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace spinq {

double wrap_angle(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

GateOp GateOp::z(int q, double angle) { return {GateKind::Z, q, wrap_angle(angle)}; }

Circuit& Circuit::add(const GateOp& g) {
  if (g.kind == GateKind::CZ) {
    if (g.qubit != -1) throw SpinqError("CZ takes no qubit index");
  } else if (g.qubit != 0 && g.qubit != 1) {
    throw SpinqError("qubit index must be 0 or 1");
  }
  GateOp op = g;
  if (op.kind == GateKind::Z) op.angle = wrap_angle(op.angle);
  ops.push_back(op);
  return *this;
}

Circuit& Circuit::append(const Circuit& c) {
  for (const auto& g : c.ops) add(g);
  return *this;
}

int Circuit::cz_count() const {
  int n = 0;
  for (const auto& g : ops) n += g.kind == GateKind::CZ ? 1 : 0;
  return n;
}

Mat gate_matrix(const GateOp& g) {
  const cplx i(0.0, 1.0);
  const double s = 1.0 / std::sqrt(2.0);
  switch (g.kind) {
    case GateKind::I:
      return pauli::I2();
    case GateKind::X90:
      return s * (pauli::I2() - i * pauli::X());
    case GateKind::Y90:
      return s * (pauli::I2() - i * pauli::Y());
    case GateKind::Z: {
      Mat m = Mat::Zero(2, 2);
      m(0, 0) = std::exp(-i * (g.angle / 2));
      m(1, 1) = std::exp(i * (g.angle / 2));
      return m;
    }
    case GateKind::CZ: {
      Mat m = Mat::Identity(4, 4);
      m(3, 3) = -1.0;
      return m;
    }
  }
  throw SpinqError("unknown gate kind");
}

Unitary ideal_unitary(const Circuit& c) {
  Mat u = Mat::Identity(4, 4);
  for (const auto& g : c.ops) {
    Mat m = gate_matrix(g);
    if (g.kind != GateKind::CZ) m = g.qubit == 0 ? kron(m, pauli::I2()) : kron(pauli::I2(), m);
    u = m * u;
  }
  return Unitary(u, 1e-9);
}

const char* to_string(GateKind k) {
  switch (k) {
    case GateKind::I:
      return "I";
    case GateKind::X90:
      return "X90";
    case GateKind::Y90:
      return "Y90";
    case GateKind::Z:
      return "Z";
    case GateKind::CZ:
      return "CZ";
  }
  return "?";
}

std::string to_text(const Circuit& c) {
  std::string out;
  if (!c.name.empty()) out += "NAME " + c.name + "\n";
  char buf[64];
  for (const auto& g : c.ops) {
    out += to_string(g.kind);
    if (g.kind != GateKind::CZ) out += " " + std::to_string(g.qubit + 1);
    if (g.kind == GateKind::Z) {
      std::snprintf(buf, sizeof buf, " %.17g", g.angle);
      out += buf;
    }
    out += "\n";
  }
  return out;
}

Circuit parse_circuit(std::string_view text) {
  Circuit c;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& why) {
    throw SpinqError("circuit line " + std::to_string(lineno) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;
    if (word == "NAME") {
      std::string rest;
      std::getline(ls, rest);
      const auto start = rest.find_first_not_of(" \t");
      c.name = start == std::string::npos ? "" : rest.substr(start);
      continue;
    }
    GateOp g;
    if (word == "CZ") {
      g = GateOp::cz();
    } else {
      int q = 0;
      if (!(ls >> q) || (q != 1 && q != 2)) fail("expected qubit 1 or 2 after " + word);
      if (word == "I") {
        g = GateOp::idle(q - 1);
      } else if (word == "X90") {
        g = GateOp::x90(q - 1);
      } else if (word == "Y90") {
        g = GateOp::y90(q - 1);
      } else if (word == "Z") {
        std::string a;
        if (!(ls >> a)) fail("Z needs an angle");
        std::size_t used = 0;
        double angle = 0.0;
        try {
          angle = std::stod(a, &used);
        } catch (const std::exception&) {
          fail("bad angle '" + a + "'");
        }
        if (used != a.size() || !std::isfinite(angle)) fail("bad angle '" + a + "'");
        g = GateOp::z(q - 1, angle);
      } else {
        fail("unknown gate '" + word + "'");
      }
    }
    std::string extra;
    if (ls >> extra) fail("unexpected token '" + extra + "'");
    c.add(g);
  }
  return c;
}

}  // namespace spinq
