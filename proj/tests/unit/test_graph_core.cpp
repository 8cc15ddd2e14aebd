#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "hampack/contraction.hpp"
#include "hampack/error.hpp"
#include "hampack/graph_io.hpp"
#include "hampack/hamilton.hpp"
#include "hampack/matching.hpp"
#include "hampack/partition.hpp"
#include "hampack/sampling.hpp"

using namespace hampack;

namespace {

// Chains one perfect matching per consecutive block pair into a matching
// path system, or returns nullopt if some layer has none.
std::optional<PathSystem> chain_matchings(const Digraph& d, const PartitionScheme& v, Seed seed) {
  PathSystem sys;
  for (Vertex w : v.block(1)) sys.paths.push_back({w});
  for (int j = 1; j < v.ell(); ++j) {
    const auto tails = v.block(j);
    const auto heads = v.block(j + 1);
    const Matching m = max_matching(bipartite_between(d, tails, heads), derive_seed(seed, "layer", j));
    if (!m.is_perfect()) return std::nullopt;
    for (auto& path : sys.paths) {
      const auto it = std::find(tails.begin(), tails.end(), path.back());
      path.push_back(heads[m.partner_of_left(static_cast<int>(it - tails.begin()))]);
    }
  }
  return sys;
}

}  // namespace

TEST(Sampling, DnpExtremes) {
  EXPECT_EQ(sample_dnp(4, 1.0, 1).edge_count(), 12);
  EXPECT_EQ(sample_dnp(4, 1.0, 99), Digraph::complete(4));
  EXPECT_EQ(sample_dnp(4, 0.0, 5).edge_count(), 0);
}

TEST(Sampling, DnpBinomialBand) {
  const auto d = sample_dnp(100, 0.5, 7);
  EXPECT_NEAR(static_cast<double>(d.edge_count()), 4950.0, 350.0);
  for (Vertex v = 0; v < 100; ++v) EXPECT_FALSE(d.has_arc(v, v));
}

TEST(Sampling, DnpIsReproducible) {
  EXPECT_EQ(sample_dnp(60, 0.3, 42), sample_dnp(60, 0.3, 42));
  EXPECT_NE(sample_dnp(60, 0.3, 42), sample_dnp(60, 0.3, 43));
}

TEST(Sampling, DnpRejectsBadParameters) {
  EXPECT_THROW(sample_dnp(0, 0.5, 1), InvalidParameter);
  EXPECT_THROW(sample_dnp(5, 1.5, 1), InvalidParameter);
  EXPECT_THROW(sample_dnp(5, -0.1, 1), InvalidParameter);
}

TEST(Sampling, SubDigraph) {
  const auto f = Digraph::complete(50);
  EXPECT_EQ(sample_sub(f, 1.0, 3), f);
  EXPECT_EQ(sample_sub(f, 0.0, 3).edge_count(), 0);
  const auto d = sample_sub(f, 0.2, 3);
  EXPECT_NEAR(static_cast<double>(d.edge_count()), 490.0, 110.0);
  EXPECT_THROW(sample_sub(f, [](Arc) { return 1.2; }, 3), InvalidParameter);
  const auto host = sample_dnp(30, 0.5, 1);
  const auto sub = sample_sub(host, 0.5, 2);
  for (const auto& a : sub.arcs()) EXPECT_TRUE(host.has_arc(a.from, a.to));
}

TEST(Sampling, RegularBipartite) {
  for (Seed seed = 0; seed < 10; ++seed) {
    const auto g = sample_regular_bipartite(12, 5, seed);
    EXPECT_TRUE(g.is_regular(5));
  }
}

TEST(Partition, BlockSizes) {
  const auto v = make_partition(10, 2, 2, 1);
  EXPECT_EQ(v.block(0).size(), 2u);
  EXPECT_EQ(v.block(1).size(), 4u);
  EXPECT_EQ(v.block(2).size(), 4u);
  const auto w = make_partition(13, 3, 4, 1);
  EXPECT_EQ(w.m(), 3);
  EXPECT_EQ(w.block(0).size(), 4u);
  for (int j = 1; j <= 3; ++j) EXPECT_EQ(w.block(j).size(), 3u);
  EXPECT_THROW(make_partition(12, 5, 1, 1), InvalidParameter);
  EXPECT_THROW(make_partition(12, 1, 2, 1), InvalidParameter);
  EXPECT_THROW(make_partition(12, 2, 0, 1), InvalidParameter);
}

TEST(Partition, CoversEveryVertexOnce) {
  const auto v = make_partition(31, 4, 7, 9);
  std::multiset<Vertex> all;
  for (int j = 0; j <= v.ell(); ++j)
    for (Vertex x : v.block(j)) {
      all.insert(x);
      EXPECT_EQ(v.block_of(x), j);
    }
  EXPECT_EQ(all.size(), 31u);
  EXPECT_EQ(std::set<Vertex>(all.begin(), all.end()).size(), 31u);
}

TEST(Partition, EdgeClasses) {
  const auto v = make_partition(13, 3, 4, 2);
  const Vertex v0 = v.block(0)[0], v1 = v.block(1)[0], v2 = v.block(2)[0], v3 = v.block(3)[0];
  EXPECT_EQ(classify_edge(v, v1, v2), EdgeClass::Interior);
  EXPECT_EQ(classify_edge(v, v2, v3), EdgeClass::Interior);
  EXPECT_EQ(classify_edge(v, v3, v1), EdgeClass::Exterior);
  EXPECT_EQ(classify_edge(v, v3, v0), EdgeClass::Exterior);
  EXPECT_EQ(classify_edge(v, v0, v1), EdgeClass::Exterior);
  EXPECT_EQ(classify_edge(v, v0, v.block(0)[1]), EdgeClass::Exterior);
  EXPECT_EQ(classify_edge(v, v2, v1), EdgeClass::Absent);
  EXPECT_EQ(classify_edge(v, v0, v2), EdgeClass::Absent);
  EXPECT_EQ(classify_edge(v, v1, v3), EdgeClass::Absent);
}

TEST(Partition, ClassCountsMatchClosedForm) {
  for (auto [n, ell, s] : {std::tuple{13, 3, 4}, {22, 4, 2}, {30, 3, 6}, {41, 5, 6}}) {
    const auto v = make_partition(n, ell, s, 5);
    const auto complete = Digraph::complete(n);
    const auto interior = arcs_of_class(complete, v, EdgeClass::Interior).edge_count();
    const auto exterior = arcs_of_class(complete, v, EdgeClass::Exterior).edge_count();
    EXPECT_EQ(interior, interior_arc_count(ell, v.m()));
    EXPECT_EQ(exterior, exterior_arc_count(s, v.m()));
    EXPECT_EQ(interior, static_cast<std::int64_t>(ell - 1) * v.m() * v.m());
    EXPECT_EQ(exterior, static_cast<std::int64_t>(v.m()) * v.m() + 2LL * s * v.m() + static_cast<std::int64_t>(s) * (s - 1));
  }
}

TEST(Contraction, EmptyPairsGiveInducedGraph) {
  const auto d = sample_dnp(12, 0.4, 3);
  const std::vector<Vertex> v0{2, 5, 7, 11};
  EXPECT_EQ(contract(d, PairList{}, v0), d.induced(v0));
}

TEST(Contraction, RulesOfTheAuxiliaryDigraph) {
  Digraph d(6);
  // pairs (0 -> 1), (2 -> 3); V0 = {4, 5}
  d.add_arc(1, 2);  // x1 -> w2 gives u1 -> u2
  d.add_arc(1, 0);  // x1 -> w1 would be a loop
  d.add_arc(4, 0);  // v -> w1 gives v -> u1
  d.add_arc(3, 5);  // x2 -> v gives u2 -> v
  d.add_arc(4, 5);  // V0 arc kept
  d.add_arc(0, 4);  // w1 is not a tail of u1; dropped
  const std::vector<Vertex> v0{4, 5};
  const PairList pairs{{{0, 1}, {2, 3}}};
  const auto c = contract(d, pairs, v0);
  EXPECT_EQ(c.n(), 4);
  EXPECT_TRUE(c.has_arc(2, 3));
  EXPECT_FALSE(c.has_arc(2, 2));
  EXPECT_TRUE(c.has_arc(0, 2));
  EXPECT_TRUE(c.has_arc(3, 1));
  EXPECT_TRUE(c.has_arc(0, 1));
  EXPECT_EQ(c.edge_count(), 4);
}

TEST(Contraction, LoopOnlyLeavesVertexIsolated) {
  Digraph d(3);
  d.add_arc(1, 0);
  const auto c = contract(d, PairList{{{0, 1}}}, std::vector<Vertex>{2});
  EXPECT_EQ(c.edge_count(), 0);
}

TEST(Contraction, OverlapIsRejected) {
  const auto d = Digraph::complete(5);
  EXPECT_THROW(contract(d, PairList{{{0, 1}, {1, 2}}}, std::vector<Vertex>{3}), InvalidInput);
  EXPECT_THROW(contract(d, PairList{{{0, 1}}}, std::vector<Vertex>{1}), InvalidInput);
}

TEST(Contraction, LiftSinglePath) {
  Digraph d(3);  // v0 = 0, path 1 -> 2
  d.add_arc(0, 1);
  d.add_arc(1, 2);
  d.add_arc(2, 0);
  const PathSystem sys{{{1, 2}}};
  const std::vector<Vertex> v0{0};
  const auto c = contract(d, sys.endpoints(), v0);
  const HamCycle small{{0, 1}};
  ASSERT_TRUE(verify_cycle(c, small));
  const auto lifted = lift_cycle(small, sys, v0);
  EXPECT_EQ(lifted.order, (std::vector<Vertex>{0, 1, 2}));
  EXPECT_TRUE(verify_cycle(d, lifted));
  EXPECT_THROW(lift_cycle(HamCycle{{0}}, sys, v0), InternalInvariantViolation);
}

TEST(Contraction, RoundTripOnRandomInstances) {
  int lifted_count = 0;
  for (Seed seed = 0; seed < 20; ++seed) {
    const auto d = sample_dnp(30, 0.6, seed);
    const auto v = make_partition(30, 3, 6, seed);
    const auto sys = chain_matchings(d, v, seed);
    if (!sys) continue;
    ASSERT_TRUE(verify_system(v, *sys, d));
    const std::vector<Vertex> v0(v.block(0).begin(), v.block(0).end());
    const auto c = contract(d, sys->endpoints(), v0);
    EXPECT_EQ(c.n(), 6 + v.m());
    const auto res = find_hamilton(c, SolverBudget{}, seed);
    if (!res.found()) continue;
    ASSERT_TRUE(verify_cycle(c, *res.cycle));
    EXPECT_TRUE(verify_cycle(d, lift_cycle(*res.cycle, *sys, v0)));
    ++lifted_count;
  }
  EXPECT_GT(lifted_count, 10);
}

TEST(Verify, Cycles) {
  const auto k = Digraph::complete(6);
  EXPECT_TRUE(verify_cycle(k, HamCycle{{3, 1, 4, 0, 5, 2}}));
  EXPECT_FALSE(verify_cycle(Digraph(6), HamCycle{{0, 1, 2, 3, 4, 5}}));
  EXPECT_FALSE(verify_cycle(k, HamCycle{{0, 1, 2, 3, 4, 4}}));
  EXPECT_FALSE(verify_cycle(k, HamCycle{{0, 1, 2}}));
  EXPECT_FALSE(verify_cycle(Digraph::complete(1), HamCycle{{0}}));
}

TEST(Verify, Systems) {
  const auto v = make_partition(13, 3, 4, 8);
  PathSystem good;
  for (int i = 0; i < 3; ++i) good.paths.push_back({v.block(1)[i], v.block(2)[i], v.block(3)[i]});
  EXPECT_TRUE(verify_system(v, good));
  auto bad = good;
  std::swap(bad.paths[0][0], bad.paths[0][1]);
  EXPECT_FALSE(verify_system(v, bad));
  auto shared = good;
  shared.paths[1][1] = shared.paths[0][1];
  EXPECT_FALSE(verify_system(v, shared));
  EXPECT_FALSE(verify_system(v, good, Digraph(13)));
}

TEST(Io, TextRoundTrip) {
  const auto d = sample_dnp(40, 0.2, 12);
  std::stringstream ss;
  write_digraph_text(ss, d);
  EXPECT_EQ(read_digraph_text(ss), d);
}

TEST(Io, BinaryRoundTrip) {
  for (int n : {1, 63, 64, 65, 130}) {
    const auto d = sample_dnp(n, 0.3, static_cast<Seed>(n));
    std::stringstream ss;
    write_digraph_binary(ss, d);
    EXPECT_EQ(read_digraph_binary(ss), d);
  }
}

TEST(Io, RejectsMalformedText) {
  std::stringstream ss("digraph n=3 m=1\n0 0\n");
  EXPECT_THROW(read_digraph_text(ss), InvalidInput);
  std::stringstream wrong("digraph n=3 m=2\n0 1\n");
  EXPECT_THROW(read_digraph_text(wrong), InvalidInput);
}
