#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "../oracles.hpp"
#include "hampack/error.hpp"
#include "hampack/matching.hpp"
#include "hampack/sampling.hpp"

using namespace hampack;

namespace {

BipartiteGraph even_cycle(int half) {
  BipartiteGraph g(half, half);
  for (int i = 0; i < half; ++i) {
    g.add_edge(i, i);
    g.add_edge(i, (i + 1) % half);
  }
  return g;
}

BipartiteGraph identity_matching(int n) {
  BipartiteGraph g(n, n);
  for (int i = 0; i < n; ++i) g.add_edge(i, i);
  return g;
}

}  // namespace

TEST(MaxMatching, Basics) {
  EXPECT_EQ(max_matching(BipartiteGraph::complete(7, 7)).size(), 7);
  EXPECT_EQ(max_matching(BipartiteGraph(5, 5)).size(), 0);
  EXPECT_EQ(max_matching(even_cycle(3)).size(), 3);
  EXPECT_EQ(max_matching(BipartiteGraph::complete(3, 8)).size(), 3);
}

TEST(MaxMatching, IsMaximumAgainstFlow) {
  for (Seed seed = 0; seed < 30; ++seed) {
    const auto g = sample_bipartite(25, 20, 0.08, seed);
    FlowNetwork net(47, 45, 46);
    for (int a = 0; a < 25; ++a) net.add_arc(45, a, 1);
    for (const auto& [a, b] : g.edges()) net.add_arc(a, 25 + b, 1);
    for (int b = 0; b < 20; ++b) net.add_arc(25 + b, 46, 1);
    const auto m = max_matching(g, seed);
    EXPECT_TRUE(m.valid_in(g));
    EXPECT_EQ(m.size(), max_flow(net).value);
  }
}

TEST(ExtractDisjoint, CompleteGraphFactorises) {
  for (auto strategy : {ExtractionStrategy::RegularFactor, ExtractionStrategy::Greedy}) {
    const auto g = BipartiteGraph::complete(6, 6);
    const auto fam = extract_disjoint_pms(g, 6, strategy, 1);
    if (strategy == ExtractionStrategy::RegularFactor) {
      EXPECT_EQ(fam.size(), 6);
    }
    EXPECT_TRUE(verify_family(g, fam));
  }
}

TEST(ExtractDisjoint, EvenCycles) {
  const auto g = even_cycle(5);
  const auto fam = extract_disjoint_pms(g, 2);
  EXPECT_EQ(fam.size(), 2);
  EXPECT_TRUE(verify_family(g, fam));
  EXPECT_EQ(fam.union_graph(), g);
}

TEST(ExtractDisjoint, RandomBipartiteReachesTarget) {
  const auto g = sample_bipartite(200, 200, 0.25, 11);
  const int target = static_cast<int>(std::ceil(0.9 * 200 * 0.25));
  const auto fam = extract_disjoint_pms(g, target, ExtractionStrategy::RegularFactor, 11);
  // This sample has minimum degree 34, which caps any disjoint family; the
  // extraction must reach that optimum.
  EXPECT_EQ(g.min_degree(), 34);
  EXPECT_EQ(fam.size(), 34);
  EXPECT_FALSE(gale_ryser_feasible(g, fam.size() + 1).feasible);
  EXPECT_TRUE(verify_family(g, fam));
}

TEST(ExtractDisjoint, ShortfallIsAResult) {
  const auto g = identity_matching(4);
  const auto fam = extract_disjoint_pms(g, 3);
  EXPECT_EQ(fam.size(), 1);
  EXPECT_EQ(extract_disjoint_pms(g, 0).size(), 0);
  const auto greedy = extract_disjoint_pms(sample_bipartite(30, 30, 0.3, 4), 20, ExtractionStrategy::Greedy, 4);
  EXPECT_TRUE(verify_family(sample_bipartite(30, 30, 0.3, 4), greedy));
}

TEST(GaleRyser, Examples) {
  EXPECT_TRUE(gale_ryser_feasible(BipartiteGraph::complete(4, 4), 4).feasible);
  const auto pm = gale_ryser_feasible(identity_matching(4), 2);
  EXPECT_FALSE(pm.feasible);
  ASSERT_TRUE(pm.witness.has_value());
  EXPECT_TRUE(gale_ryser_feasible(even_cycle(3), 1).feasible);
}

TEST(GaleRyser, WitnessViolatesCondition) {
  for (Seed seed = 0; seed < 40; ++seed) {
    const auto g = sample_bipartite(14, 14, 0.35, seed);
    for (int r = 1; r <= 5; ++r) {
      const auto res = gale_ryser_feasible(g, r);
      const bool factor_exists = res.flow_value == static_cast<std::int64_t>(r) * 14;
      EXPECT_EQ(res.feasible, factor_exists);
      if (res.feasible) continue;
      ASSERT_TRUE(res.witness.has_value());
      const auto& [x, y] = *res.witness;
      Bitset xs(14), ys(14);
      for (int a : x) xs.set(a);
      for (int b : y) ys.set(b);
      EXPECT_LT(g.edges_between(xs, ys), static_cast<std::int64_t>(r) * (static_cast<int>(x.size() + y.size()) - 14));
    }
  }
}

TEST(HallDecompose, SmallCases) {
  const auto k = BipartiteGraph::complete(3, 3);
  const auto fam = hall_decompose(k, 3);
  EXPECT_EQ(fam.size(), 3);
  EXPECT_TRUE(verify_family(k, fam));
  EXPECT_EQ(fam.union_graph(), k);
  const auto c8 = even_cycle(4);
  const auto two = hall_decompose(c8, 2);
  EXPECT_EQ(two.size(), 2);
  EXPECT_EQ(two.union_graph(), c8);
  EXPECT_THROW(hall_decompose(c8, 3), InvalidInput);
  EXPECT_THROW(hall_decompose(sample_bipartite(6, 6, 0.5, 1), 3), InvalidInput);
}

TEST(HallDecompose, RandomRegular) {
  for (Seed seed = 0; seed < 10; ++seed) {
    const auto g = sample_regular_bipartite(12, 5, seed);
    const auto fam = hall_decompose(g, 5, seed);
    EXPECT_EQ(fam.size(), 5);
    EXPECT_TRUE(verify_family(g, fam));
    EXPECT_EQ(fam.union_graph(), g);
  }
}

TEST(Permanent, ClosedForms) {
  EXPECT_EQ(count_pms(BipartiteGraph::complete(3, 3)), 6);
  EXPECT_EQ(count_pms(even_cycle(3)), 2);
  EXPECT_EQ(count_pms(BipartiteGraph(0, 0)), 1);
  EXPECT_EQ(count_pms(BipartiteGraph(3, 3)), 0);
  BigInt fact = 1;
  for (int i = 2; i <= 20; ++i) fact *= i;
  EXPECT_EQ(count_pms(BipartiteGraph::complete(20, 20)), fact);
  EXPECT_THROW(count_pms(BipartiteGraph(31, 31)), SizeLimit);
  EXPECT_THROW(count_pms(BipartiteGraph(3, 4)), InvalidInput);
}

TEST(Permanent, MatchesBruteForce) {
  for (int n = 1; n <= 8; ++n)
    for (Seed seed = 0; seed < 10; ++seed) {
      const auto g = sample_bipartite(n, n, 0.5, seed * 31 + static_cast<Seed>(n));
      EXPECT_EQ(count_pms(g), oracle::permanent(g));
      EXPECT_EQ(count_pms_reference(g), oracle::permanent(g));
    }
  const auto g10 = sample_bipartite(10, 10, 0.5, 77);
  EXPECT_EQ(count_pms(g10), oracle::permanent(g10));
}

TEST(Permanent, ParallelMatchesSerial) {
  for (Seed seed = 0; seed < 4; ++seed) {
    const auto g = sample_bipartite(18, 18, 0.6, seed);
    EXPECT_EQ(count_pms(g), count_pms_reference(g));
  }
}

TEST(Permanent, ModularPathOnDenseMatrix) {
  // 2^24 * 24^24 exceeds the 128-bit fast path, so this exercises CRT.
  BigInt fact = 1;
  for (int i = 2; i <= 24; ++i) fact *= i;
  EXPECT_EQ(count_pms(BipartiteGraph::complete(24, 24)), fact);
}

TEST(VdwBound, Values) {
  EXPECT_NEAR(vdw_bound(3, 3), std::log(6.0), 1e-12);
  EXPECT_NEAR(vdw_bound(3, 2), std::log(48.0 / 27.0), 1e-12);
  for (Seed seed = 0; seed < 5; ++seed) {
    const auto g = sample_regular_bipartite(20, 10, seed);
    EXPECT_LE(vdw_bound(20, 10), log_of(count_pms(g)));
  }
}

TEST(FamilyIo, RoundTrip) {
  const auto g = sample_regular_bipartite(9, 4, 3);
  const auto fam = hall_decompose(g, 4, 3);
  std::stringstream ss;
  write_family(ss, fam);
  const auto back = read_family(ss, 9, 9);
  ASSERT_EQ(back.size(), fam.size());
  for (int k = 0; k < fam.size(); ++k) EXPECT_EQ(back.matchings[k], fam.matchings[k]);
}
