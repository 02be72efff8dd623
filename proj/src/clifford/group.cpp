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

#include "spinq/clifford/group.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

namespace spinq {

namespace {

int quarter_turns(double angle) {
  const double k = angle / (kPi / 2);
  const double r = std::round(k);
  if (std::abs(k - r) > 1e-9) throw SpinqError("Z angle is not a multiple of pi/2");
  return static_cast<int>(((static_cast<long>(r) % 4) + 4) % 4);
}

const Tableau& gate_tableau(const GateOp& g) {
  // [kind/qubit slot][quarter turns]
  static const std::map<std::tuple<int, int, int>, Tableau> table = [] {
    std::map<std::tuple<int, int, int>, Tableau> m;
    for (int q = 0; q < 2; ++q) {
      for (GateOp g1 : {GateOp::idle(q), GateOp::x90(q), GateOp::y90(q)}) {
        Circuit c;
        c.add(g1);
        m[{static_cast<int>(g1.kind), q, 0}] = tableau_of(ideal_unitary(c).matrix());
      }
      for (int k = 0; k < 4; ++k) {
        Circuit c;
        c.add(GateOp::z(q, k * kPi / 2));
        m[{static_cast<int>(GateKind::Z), q, k}] = tableau_of(ideal_unitary(c).matrix());
      }
    }
    Circuit c;
    c.add(GateOp::cz());
    m[{static_cast<int>(GateKind::CZ), -1, 0}] = tableau_of(ideal_unitary(c).matrix());
    return m;
  }();
  const int k = g.kind == GateKind::Z ? quarter_turns(g.angle) : 0;
  return table.at({static_cast<int>(g.kind), g.qubit, k});
}

int pulse_count(const std::vector<GateOp>& ops) {
  return static_cast<int>(std::count_if(ops.begin(), ops.end(), [](const GateOp& g) {
    return g.kind == GateKind::X90 || g.kind == GateKind::Y90;
  }));
}

std::vector<GateOp> on_qubit(std::vector<GateOp> ops, int q) {
  for (auto& g : ops) g.qubit = q;
  return ops;
}

// Entangling cores; each class is the double coset (C1 x C1) core (C1 x C1).
Circuit class_core(CliffordClass c) {
  Circuit k;
  switch (c) {
    case CliffordClass::SingleQubit:
      break;
    case CliffordClass::CnotLike:
      k.add(GateOp::cz());
      break;
    case CliffordClass::IswapLike:
      k.add(GateOp::cz()).add(GateOp::y90(0)).add(GateOp::x90(1)).add(GateOp::cz());
      break;
    case CliffordClass::SwapLike:
      k.add(GateOp::cz()).add(GateOp::y90(0)).add(GateOp::x90(1)).add(GateOp::cz());
      k.add(GateOp::y90(0)).add(GateOp::x90(1)).add(GateOp::cz());
      break;
  }
  return k;
}

}  // namespace

const char* to_string(CliffordClass c) {
  switch (c) {
    case CliffordClass::SingleQubit:
      return "single-qubit";
    case CliffordClass::CnotLike:
      return "cnot-like";
    case CliffordClass::IswapLike:
      return "iswap-like";
    case CliffordClass::SwapLike:
      return "swap-like";
  }
  return "?";
}

Tableau circuit_tableau(const Circuit& c) {
  Tableau t = Tableau::identity();
  for (const auto& g : c.ops) t = compose(t, gate_tableau(g));
  return t;
}

std::vector<SingleQubitClifford> build_single_qubit_cliffords() {
  // Words Z? (P Z?)^n for n pulses, shortest first; the first word reaching
  // a tableau becomes its decomposition.
  std::vector<std::vector<GateOp>> words{{}};
  std::vector<std::vector<GateOp>> frontier{{}};
  for (int k = 1; k < 4; ++k) words.push_back({GateOp::z(0, k * kPi / 2)});
  frontier = words;
  for (int n = 1; n <= 3; ++n) {
    std::vector<std::vector<GateOp>> next;
    for (const auto& w : frontier) {
      for (const GateOp p : {GateOp::x90(0), GateOp::y90(0)}) {
        for (int k = 0; k < 4; ++k) {
          auto v = w;
          v.push_back(p);
          if (k > 0) v.push_back(GateOp::z(0, k * kPi / 2));
          next.push_back(v);
        }
      }
    }
    words.insert(words.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  std::stable_sort(words.begin(), words.end(), [](const auto& a, const auto& b) {
    const int pa = pulse_count(a), pb = pulse_count(b);
    return pa != pb ? pa < pb : a.size() < b.size();
  });
  std::vector<SingleQubitClifford> out;
  std::vector<std::uint32_t> seen;
  for (const auto& w : words) {
    Circuit c;
    for (const auto& g : w) c.add(g);
    const Tableau t = circuit_tableau(c);
    if (std::find(seen.begin(), seen.end(), t.key()) != seen.end()) continue;
    seen.push_back(t.key());
    out.push_back({t, w});
  }
  if (out.size() != 24) throw SpinqError("single-qubit Clifford enumeration did not find 24 elements");
  return out;
}

const std::vector<SingleQubitClifford>& single_qubit_cliffords() {
  static const std::vector<SingleQubitClifford> c1 = build_single_qubit_cliffords();
  return c1;
}

CliffordTable CliffordTable::from_elements(std::vector<CliffordElement> elements) {
  CliffordTable t;
  t.elements_ = std::move(elements);
  t.lookup_.assign(kTableauKeySpace, -1);
  for (std::size_t i = 0; i < t.elements_.size(); ++i) {
    auto& e = t.elements_[i];
    e.id = static_cast<std::uint32_t>(i);
    const std::uint32_t k = e.tableau.key();
    if (t.lookup_[k] != -1) throw SpinqError("duplicate Clifford element");
    t.lookup_[k] = static_cast<std::int32_t>(i);
    if (e.unitary.size() == 0) e.unitary = ideal_unitary(e.decomposition).matrix();
  }
  t.identity_ = t.index_of(Tableau::identity());
  t.inverse_.resize(t.elements_.size());
  for (std::size_t i = 0; i < t.elements_.size(); ++i) t.inverse_[i] = t.index_of(inverse(t.elements_[i].tableau));
  return t;
}

std::uint32_t CliffordTable::index_of(const Tableau& t) const {
  const std::int32_t i = lookup_.empty() ? -1 : lookup_[t.key()];
  if (i < 0) throw SpinqError("tableau not found in the Clifford table");
  return static_cast<std::uint32_t>(i);
}

bool CliffordTable::contains(const Tableau& t) const { return !lookup_.empty() && lookup_[t.key()] >= 0; }

std::uint32_t CliffordTable::compose(std::uint32_t first, std::uint32_t second) const {
  return index_of(spinq::compose(elements_.at(first).tableau, elements_.at(second).tableau));
}

std::uint32_t CliffordTable::invert(std::uint32_t a) const { return inverse_.at(a); }

std::uint32_t CliffordTable::sample(std::mt19937_64& rng) const {
  std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(elements_.size() - 1));
  return pick(rng);
}

std::size_t CliffordTable::count(CliffordClass c) const {
  return static_cast<std::size_t>(
      std::count_if(elements_.begin(), elements_.end(), [c](const CliffordElement& e) { return e.cls == c; }));
}

CliffordTable build_two_qubit_cliffords() {
  const auto& c1 = single_qubit_cliffords();
  struct Local {
    Tableau t;
    std::vector<GateOp> ops;
    int pulses;
  };
  std::vector<Local> locals;
  for (const auto& a : c1) {
    for (const auto& b : c1) {
      std::vector<GateOp> ops = on_qubit(a.ops, 0);
      const auto bo = on_qubit(b.ops, 1);
      ops.insert(ops.end(), bo.begin(), bo.end());
      Circuit c;
      for (const auto& g : ops) c.add(g);
      // Parallel layers cost the longer of the two pulse trains.
      locals.push_back({circuit_tableau(c), ops, std::max(pulse_count(a.ops), pulse_count(b.ops))});
    }
  }
  std::stable_sort(locals.begin(), locals.end(), [](const Local& x, const Local& y) { return x.pulses < y.pulses; });

  std::vector<std::uint8_t> seen(kTableauKeySpace, 0);
  std::vector<CliffordElement> elements;
  elements.reserve(11520);
  for (CliffordClass cls :
       {CliffordClass::SingleQubit, CliffordClass::CnotLike, CliffordClass::IswapLike, CliffordClass::SwapLike}) {
    const Circuit core = class_core(cls);
    const Tableau tc = circuit_tableau(core);
    const std::size_t before = elements.size();
    for (const auto& a : locals) {
      const Tableau ta = compose(a.t, tc);
      for (const auto& b : locals) {
        const Tableau t = compose(ta, b.t);
        const std::uint32_t k = t.key();
        if (seen[k]) continue;
        seen[k] = 1;
        CliffordElement e;
        e.cls = cls;
        e.tableau = t;
        for (const auto& g : a.ops) e.decomposition.add(g);
        e.decomposition.append(core);
        for (const auto& g : b.ops) e.decomposition.add(g);
        elements.push_back(std::move(e));
      }
      if (cls == CliffordClass::SingleQubit) break;  // a = identity already spans the class
    }
    static constexpr std::size_t kExpected[] = {576, 5184, 5184, 576};
    if (elements.size() - before != kExpected[static_cast<int>(cls)]) {
      throw SpinqError(std::string("Clifford class ") + to_string(cls) + " has " +
                       std::to_string(elements.size() - before) + " elements");
    }
  }
  return CliffordTable::from_elements(std::move(elements));
}

const CliffordTable& clifford_table() {
  static const CliffordTable table = build_two_qubit_cliffords();
  return table;
}

}  // namespace spinq
