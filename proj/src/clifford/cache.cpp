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
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>

#include "spinq/clifford/group.hpp"

namespace spinq {

namespace {

constexpr char kMagic[8] = {'S', 'P', 'Q', 'C', 'L', 'I', 'F', '\0'};

void put_u8(std::string& b, std::uint32_t v) { b.push_back(static_cast<char>(v & 0xffu)); }
void put_u16(std::string& b, std::uint32_t v) {
  put_u8(b, v);
  put_u8(b, v >> 8);
}
void put_u32(std::string& b, std::uint32_t v) {
  put_u16(b, v);
  put_u16(b, v >> 16);
}

struct Reader {
  const std::string& b;
  std::size_t pos = 0;
  bool ok = true;
  std::uint32_t u8() {
    if (pos >= b.size()) {
      ok = false;
      return 0;
    }
    return static_cast<unsigned char>(b[pos++]);
  }
  std::uint32_t u16() {
    const std::uint32_t lo = u8();
    return lo | (u8() << 8);
  }
  std::uint32_t u32() {
    const std::uint32_t lo = u16();
    return lo | (u16() << 16);
  }
};

}  // namespace

void save_cliffords(const CliffordTable& t, const std::string& path) {
  std::string b(kMagic, sizeof kMagic);
  put_u32(b, kCliffordCacheVersion);
  put_u32(b, static_cast<std::uint32_t>(t.size()));
  for (const auto& e : t.elements()) {
    put_u32(b, e.tableau.key());
    put_u8(b, static_cast<std::uint32_t>(e.cls));
    put_u16(b, static_cast<std::uint32_t>(e.decomposition.size()));
    for (const auto& g : e.decomposition.ops) {
      put_u8(b, static_cast<std::uint32_t>(g.kind));
      put_u8(b, g.qubit < 0 ? 0xffu : static_cast<std::uint32_t>(g.qubit));
      put_u8(b, g.kind == GateKind::Z ? static_cast<std::uint32_t>(std::lround(g.angle / (kPi / 2))) % 4 : 0u);
    }
  }
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw SpinqError("cannot write Clifford cache " + tmp);
    out.write(b.data(), static_cast<std::streamsize>(b.size()));
    if (!out) throw SpinqError("cannot write Clifford cache " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

CliffordTable load_cliffords(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {};
  const std::string b((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (b.size() < sizeof kMagic || b.compare(0, sizeof kMagic, std::string(kMagic, sizeof kMagic)) != 0) return {};
  Reader r{b, sizeof kMagic};
  if (r.u32() != kCliffordCacheVersion) return {};
  const std::uint32_t n = r.u32();
  if (!r.ok || n != 11520) return {};
  std::vector<CliffordElement> elements(n);
  for (auto& e : elements) {
    e.tableau = Tableau::from_key(r.u32());
    const std::uint32_t cls = r.u8();
    if (cls > 3) return {};
    e.cls = static_cast<CliffordClass>(cls);
    const std::uint32_t n_ops = r.u16();
    for (std::uint32_t k = 0; k < n_ops && r.ok; ++k) {
      const std::uint32_t kind = r.u8();
      const std::uint32_t q = r.u8();
      const std::uint32_t quarter = r.u8();
      if (kind > static_cast<std::uint32_t>(GateKind::CZ) || quarter > 3) return {};
      GateOp g{static_cast<GateKind>(kind), q == 0xffu ? -1 : static_cast<int>(q), 0.0};
      if (g.kind == GateKind::Z) g.angle = wrap_angle(quarter * kPi / 2);
      try {
        e.decomposition.add(g);
      } catch (const SpinqError&) {
        return {};
      }
    }
    if (!r.ok || !e.tableau.valid() || !(circuit_tableau(e.decomposition) == e.tableau)) return {};
  }
  if (r.pos != b.size()) return {};
  try {
    return CliffordTable::from_elements(std::move(elements));
  } catch (const SpinqError&) {
    return {};
  }
}

CliffordTable load_or_build_cliffords(const std::string& path) {
  if (!path.empty()) {
    CliffordTable t = load_cliffords(path);
    if (t.size() == 11520) return t;
  }
  CliffordTable t = build_two_qubit_cliffords();
  if (!path.empty()) {
    try {
      save_cliffords(t, path);
    } catch (const std::exception&) {
      // The cache is an optimization only.
    }
  }
  return t;
}

}  // namespace spinq
