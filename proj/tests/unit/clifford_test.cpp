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

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <set>

#include <gtest/gtest.h>

#include "spinq/clifford/group.hpp"
#include "spinq/util/rng.hpp"

using namespace spinq;

namespace {

Mat single_qubit_unitary(const std::vector<GateOp>& ops) {
  Circuit c;
  for (const auto& g : ops) c.add(g);
  const Mat u = ideal_unitary(c).matrix();
  // Gates act on qubit 0 only: read the 2x2 block on the |.d> subspace.
  Mat out(2, 2);
  out << u(0, 0), u(0, 2), u(2, 0), u(2, 2);
  return out;
}

}  // namespace

TEST(SingleQubitCliffords, TwentyFourDistinctElements) {
  const auto& c1 = single_qubit_cliffords();
  ASSERT_EQ(c1.size(), 24u);
  for (std::size_t a = 0; a < c1.size(); ++a) {
    EXPECT_LE(c1[a].ops.size() - std::count_if(c1[a].ops.begin(), c1[a].ops.end(),
                                                [](const GateOp& g) { return g.kind == GateKind::Z; }),
              2u);
    for (std::size_t b = a + 1; b < c1.size(); ++b) {
      EXPECT_LT(phase_insensitive_overlap(single_qubit_unitary(c1[a].ops), single_qubit_unitary(c1[b].ops)),
                1.0 - 1e-6);
    }
  }
  EXPECT_EQ(c1[0].tableau, Tableau::identity());
}

TEST(SingleQubitCliffords, BruteForceEnumerationFindsTheSameSet) {
  // Products of X90 and Y90 up to depth 6, deduplicated up to phase.
  std::vector<Mat> found{Mat::Identity(2, 2)};
  std::vector<Mat> frontier = found;
  const Mat gens[2] = {single_qubit_unitary({GateOp::x90(0)}), single_qubit_unitary({GateOp::y90(0)})};
  for (int depth = 0; depth < 6; ++depth) {
    std::vector<Mat> next;
    for (const Mat& m : frontier) {
      for (const Mat& g : gens) {
        const Mat u = g * m;
        bool seen = false;
        for (const Mat& f : found) seen = seen || phase_insensitive_overlap(f, u) > 1 - 1e-9;
        if (!seen) {
          found.push_back(u);
          next.push_back(u);
        }
      }
    }
    frontier = next;
  }
  ASSERT_EQ(found.size(), 24u);
  for (const auto& c : single_qubit_cliffords()) {
    const Mat u = single_qubit_unitary(c.ops);
    bool hit = false;
    for (const Mat& f : found) hit = hit || phase_insensitive_overlap(f, u) > 1 - 1e-9;
    EXPECT_TRUE(hit);
  }
}

TEST(SingleQubitCliffords, ContainsGeneratorsAndIsClosed) {
  const auto& c1 = single_qubit_cliffords();
  std::set<std::uint32_t> keys;
  for (const auto& c : c1) keys.insert(c.tableau.key());
  Circuit x, y;
  x.add(GateOp::x90(0));
  y.add(GateOp::y90(0));
  EXPECT_TRUE(keys.count(circuit_tableau(x).key()));
  EXPECT_TRUE(keys.count(circuit_tableau(y).key()));
  for (const auto& a : c1) {
    for (const auto& b : c1) EXPECT_TRUE(keys.count(compose(a.tableau, b.tableau).key()));
  }
}

TEST(CliffordTable, SizeClassesAndCzCounts) {
  const auto start = std::chrono::steady_clock::now();
  const CliffordTable t = build_two_qubit_cliffords();
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_LT(secs, 10.0);
  ASSERT_EQ(t.size(), 11520u);
  EXPECT_EQ(t.count(CliffordClass::SingleQubit), 576u);
  EXPECT_EQ(t.count(CliffordClass::CnotLike), 5184u);
  EXPECT_EQ(t.count(CliffordClass::IswapLike), 5184u);
  EXPECT_EQ(t.count(CliffordClass::SwapLike), 576u);
  double total_cz = 0.0;
  for (const auto& e : t.elements()) {
    EXPECT_EQ(e.decomposition.cz_count(), static_cast<int>(e.cls));
    total_cz += e.decomposition.cz_count();
  }
  EXPECT_DOUBLE_EQ(total_cz / 11520.0, 1.5);
}

TEST(CliffordTable, EveryElementValidAndDecompositionMatches) {
  const CliffordTable& t = clifford_table();
  std::set<std::uint32_t> keys;
  for (const auto& e : t.elements()) {
    EXPECT_TRUE(e.tableau.valid());
    keys.insert(e.tableau.key());
    EXPECT_NEAR(phase_insensitive_overlap(ideal_unitary(e.decomposition).matrix(), e.unitary), 1.0, 1e-9);
    EXPECT_EQ(tableau_of(e.unitary), e.tableau);
    EXPECT_EQ(t.index_of(e.tableau), e.id);
  }
  EXPECT_EQ(keys.size(), 11520u);
}

TEST(CliffordTable, InversesAndIdentity) {
  const CliffordTable& t = clifford_table();
  EXPECT_EQ(t.invert(t.identity()), t.identity());
  for (std::uint32_t a = 0; a < t.size(); ++a) {
    const std::uint32_t inv = t.invert(a);
    ASSERT_LT(inv, t.size());
    EXPECT_EQ(t.compose(a, inv), t.identity());
    EXPECT_EQ(t.compose(inv, a), t.identity());
  }
}

TEST(CliffordTable, ClosureOnRandomProducts) {
  const CliffordTable& t = clifford_table();
  auto rng = keyed_stream(1, {tag(StreamTag::Synthetic)});
  for (int i = 0; i < 10000; ++i) {
    const std::uint32_t a = t.sample(rng), b = t.sample(rng);
    EXPECT_TRUE(t.contains(compose(t[a].tableau, t[b].tableau)));
  }
}

TEST(CliffordTable, ComposeMatchesMatrixProduct) {
  const CliffordTable& t = clifford_table();
  auto rng = keyed_stream(2, {tag(StreamTag::Synthetic)});
  for (int i = 0; i < 1000; ++i) {
    const std::uint32_t a = t.sample(rng), b = t.sample(rng);
    const std::uint32_t ab = t.compose(a, b);
    EXPECT_NEAR(phase_insensitive_overlap(t[b].unitary * t[a].unitary, t[ab].unitary), 1.0, 1e-9);
  }
}

TEST(CliffordTable, SamplingIsSeedDeterministicAndCoversTheGroup) {
  const CliffordTable& t = clifford_table();
  auto r1 = keyed_stream(3, {tag(StreamTag::Sequence)});
  auto r2 = keyed_stream(3, {tag(StreamTag::Sequence)});
  std::vector<int> hist(4, 0);
  for (int i = 0; i < 20000; ++i) {
    const std::uint32_t a = t.sample(r1);
    EXPECT_EQ(a, t.sample(r2));
    ++hist[static_cast<int>(t[a].cls)];
  }
  // Class frequencies 0.05 / 0.45 / 0.45 / 0.05.
  EXPECT_NEAR(hist[0] / 20000.0, 0.05, 0.01);
  EXPECT_NEAR(hist[1] / 20000.0, 0.45, 0.02);
  EXPECT_NEAR(hist[2] / 20000.0, 0.45, 0.02);
  EXPECT_NEAR(hist[3] / 20000.0, 0.05, 0.01);
}

TEST(CliffordTable, UnknownTableauThrows) {
  Tableau bad = Tableau::identity();
  bad.image[0] = bad.image[1];
  EXPECT_FALSE(bad.valid());
  EXPECT_THROW(clifford_table().index_of(bad), SpinqError);
}

TEST(Tableau, NonCliffordUnitaryThrows) {
  Circuit c;
  c.add(GateOp::z(0, 0.3));
  EXPECT_THROW(tableau_of(ideal_unitary(c).matrix()), SpinqError);
  EXPECT_THROW(circuit_tableau(c), SpinqError);
}

TEST(Tableau, KeyRoundTripAndPauliAlgebra) {
  const CliffordTable& t = clifford_table();
  for (std::uint32_t a = 0; a < t.size(); a += 37) EXPECT_EQ(Tableau::from_key(t[a].tableau.key()), t[a].tableau);
  const Pauli x1 = Pauli::hermitian(1, 0, false), z1 = Pauli::hermitian(0, 1, false), z2 = Pauli::hermitian(0, 2, false);
  EXPECT_FALSE(commute(x1, z1));
  EXPECT_TRUE(commute(x1, z2));
  const Mat prod = pauli_matrix(x1 * z1);
  EXPECT_LT((prod - pauli_matrix(x1) * pauli_matrix(z1)).norm(), 1e-12);
}

TEST(CliffordCache, RoundTripAndVersionMismatch) {
  const auto path = (std::filesystem::temp_directory_path() / "spinq_clifford_cache_test.bin").string();
  std::filesystem::remove(path);
  save_cliffords(clifford_table(), path);
  const CliffordTable loaded = load_cliffords(path);
  ASSERT_EQ(loaded.size(), 11520u);
  for (std::uint32_t a = 0; a < loaded.size(); a += 101) {
    EXPECT_EQ(loaded[a].tableau, clifford_table()[a].tableau);
    EXPECT_EQ(loaded[a].decomposition, clifford_table()[a].decomposition);
  }
  {
    std::FILE* f = std::fopen(path.c_str(), "r+b");
    ASSERT_NE(f, nullptr);
    std::fseek(f, 8, SEEK_SET);
    const unsigned char junk[4] = {0xff, 0xff, 0xff, 0x7f};
    std::fwrite(junk, 1, 4, f);
    std::fclose(f);
  }
  EXPECT_EQ(load_cliffords(path).size(), 0u);
  EXPECT_EQ(load_or_build_cliffords(path).size(), 11520u);
  EXPECT_EQ(load_cliffords(path).size(), 11520u);
  std::filesystem::remove(path);
}
