#include <gtest/gtest.h>

#include "../oracles.hpp"
#include "hampack/error.hpp"
#include "hampack/flow.hpp"
#include "hampack/sampling.hpp"

using namespace hampack;

TEST(MaxFlow, SingleArc) {
  FlowNetwork net(2, 0, 1);
  net.add_arc(0, 1, 5);
  EXPECT_EQ(max_flow(net).value, 5);
}

TEST(MaxFlow, TwoPaths) {
  FlowNetwork net(4, 0, 3);
  net.add_arc(0, 1, 1);
  net.add_arc(1, 3, 1);
  net.add_arc(0, 2, 1);
  net.add_arc(2, 3, 1);
  EXPECT_EQ(max_flow(net).value, 2);
}

TEST(MaxFlow, RejectsBadArcs) {
  FlowNetwork net(3, 0, 2);
  EXPECT_THROW(net.add_arc(1, 0, 1), InvalidInput);
  EXPECT_THROW(net.add_arc(2, 1, 1), InvalidInput);
  EXPECT_THROW(net.add_arc(0, 1, -1), InvalidInput);
  EXPECT_THROW(FlowNetwork(3, 1, 1), InvalidParameter);
}

TEST(MaxFlow, EqualsBruteForceMinCut) {
  for (Seed seed = 0; seed < 60; ++seed) {
    CounterRng rng(seed);
    const int n = 4 + static_cast<int>(rng.below(13));
    FlowNetwork net(n, 0, n - 1);
    for (int u = 0; u < n - 1; ++u)
      for (int v = 1; v < n; ++v)
        if (u != v && rng.bernoulli(0.35)) net.add_arc(u, v, static_cast<std::int64_t>(rng.below(9)));
    const auto res = max_flow(net);
    EXPECT_EQ(res.value, oracle::min_cut(net));
    EXPECT_EQ(cut_capacity(net, res.source_side), res.value);

    std::vector<std::int64_t> balance(static_cast<std::size_t>(n), 0);
    for (std::size_t i = 0; i < net.arcs().size(); ++i) {
      const auto& a = net.arcs()[i];
      EXPECT_GE(res.flow[i], 0);
      EXPECT_LE(res.flow[i], a.capacity);
      balance[static_cast<std::size_t>(a.from)] -= res.flow[i];
      balance[static_cast<std::size_t>(a.to)] += res.flow[i];
    }
    for (int v = 1; v < n - 1; ++v) EXPECT_EQ(balance[static_cast<std::size_t>(v)], 0);
    EXPECT_EQ(balance[static_cast<std::size_t>(n - 1)], res.value);
  }
}

namespace {

void expect_completed(const RFactorInstance& inst, const RFactorResult& res) {
  ASSERT_TRUE(res.feasible);
  const int n = inst.host.left_size();
  for (const auto& [a, b] : res.added.edges()) {
    EXPECT_FALSE(inst.placed.has_edge(a, b));
    EXPECT_TRUE(inst.host.has_edge(a, b));
  }
  const auto total = res.added.united(inst.placed);
  EXPECT_EQ(total.edge_count(), res.added.edge_count() + inst.placed.edge_count());
  for (int v = 0; v < n; ++v) {
    EXPECT_EQ(total.left_degree(v), inst.r);
    EXPECT_EQ(total.right_degree(v), inst.r);
  }
}

}  // namespace

TEST(RFactor, EmptyPlacedOnComplete) {
  RFactorInstance inst{BipartiteGraph::complete(5, 5), BipartiteGraph(5, 5), 2};
  const auto res = complete_to_r_factor(inst);
  expect_completed(inst, res);
  EXPECT_TRUE(res.half_degree_hypothesis);
}

TEST(RFactor, PerfectMatchingPlaced) {
  BipartiteGraph h(3, 3);
  for (int i = 0; i < 3; ++i) h.add_edge(i, i);
  RFactorInstance inst{BipartiteGraph::complete(3, 3), h, 2};
  const auto res = complete_to_r_factor(inst);
  expect_completed(inst, res);
  EXPECT_TRUE(res.added.is_regular(1));
}

TEST(RFactor, RandomDenseHost) {
  const auto g = sample_bipartite(60, 60, 0.5, 21);
  BipartiteGraph h(60, 60);
  CounterRng rng(22);
  for (int tries = 0; tries < 400; ++tries) {
    const int a = static_cast<int>(rng.below(60));
    const int b = static_cast<int>(rng.below(60));
    if (h.left_degree(a) < 3 && h.right_degree(b) < 3) h.add_edge(a, b);
  }
  RFactorInstance inst{g, h, 6};
  const auto res = complete_to_r_factor(inst);
  expect_completed(inst, res);
  EXPECT_EQ(res.flow_value, res.required);
}

TEST(RFactor, InfeasibleIsReported) {
  BipartiteGraph g(4, 4);
  for (int i = 0; i < 4; ++i) g.add_edge(i, i);
  const auto res = complete_to_r_factor({g, BipartiteGraph(4, 4), 2});
  EXPECT_FALSE(res.feasible);
  EXPECT_EQ(res.flow_value, 4);
  EXPECT_EQ(res.required, 8);
  BipartiteGraph dense = BipartiteGraph::complete(4, 4);
  EXPECT_THROW(complete_to_r_factor({dense, dense, 2}), InvalidParameter);
}

TEST(Expansion, CompleteGraphHasNoLargeSetViolation) {
  const auto g = BipartiteGraph::complete(40, 40);
  const auto rep = check_expansion_hypothesis(g, 40, 3000, 1);
  for (const auto& v : rep.violations) EXPECT_NE(v.condition, 1);
}

TEST(Expansion, EmptyGraphViolatesImmediately) {
  const auto rep = check_expansion_hypothesis(BipartiteGraph(10, 10), 1, 100, 1);
  ASSERT_TRUE(rep.violation_found());
  EXPECT_EQ(rep.violations.front().condition, 1);
  EXPECT_FALSE(rep.degree_ok);
  EXPECT_TRUE(revalidate(BipartiteGraph(10, 10), 1, rep.violations.front()));
}

TEST(Expansion, RandomBipartitePasses) {
  const auto g = sample_bipartite(100, 100, 0.4, 5);
  const int d = 35;
  const auto rep = check_expansion_hypothesis(g, d, 20000, 5);
  EXPECT_FALSE(rep.violation_found()) << rep.summary();
  EXPECT_EQ(rep.trials, 20000);
}

TEST(Expansion, DenseSmallSetIsFound) {
  // Left vertices 0..3 all see only right vertices 0..3: a dense 4 x 4 block
  // with |Y| < 2|X|.
  BipartiteGraph g(40, 40);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) g.add_edge(a, b);
  for (int a = 4; a < 40; ++a)
    for (int b = 0; b < 40; ++b)
      if ((a + b) % 3 == 0) g.add_edge(a, b);
  const auto rep = check_expansion_hypothesis(g, 4, 20000, 3);
  ASSERT_TRUE(rep.violation_found());
  for (const auto& v : rep.violations) EXPECT_TRUE(revalidate(g, 4, v));
}
