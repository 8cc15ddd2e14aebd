#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "../oracles.hpp"
#include "hampack/error.hpp"
#include "hampack/hamilton.hpp"
#include "hampack/matching.hpp"
#include "hampack/params.hpp"
#include "hampack/pipelines.hpp"
#include "hampack/report.hpp"
#include "hampack/sampling.hpp"

using namespace hampack;

namespace {

using ArcKey = std::pair<int, int>;

std::multiset<ArcKey> arc_multiset(const std::vector<HamCycle>& cycles) {
  std::multiset<ArcKey> out;
  for (const auto& c : cycles)
    for (std::size_t i = 0; i < c.order.size(); ++i)
      out.insert({c.order[i], c.order[(i + 1) % c.order.size()]});
  return out;
}

// Arcs of d allowed by the template digraph of the partition, classified
// from the blocks directly.
Digraph template_part(const Digraph& d, const PartitionScheme& v) {
  Digraph out(d.n());
  const int ell = v.ell();
  for (const Arc& a : d.arcs()) {
    const int bu = v.block_of(a.from), bw = v.block_of(a.to);
    if ((bu >= 1 && bu < ell && bw == bu + 1) || ((bu == 0 || bu == ell) && (bw == 0 || bw == 1)))
      out.add_arc(a.from, a.to);
  }
  return out;
}

}  // namespace

TEST(Policy, RefusesBelowFloors) {
  EXPECT_THROW(parameter_policy(100, 0.001, Task::Pack), PolicyRefusal);
  EXPECT_THROW(parameter_policy(200, 0.01, Task::Cover), PolicyRefusal);
  EXPECT_THROW(parameter_policy(6, 1.0, Task::Count), PolicyRefusal);
  EXPECT_THROW(parameter_policy(40, 1.0, Task::Pack), PolicyRefusal);
}

TEST(Policy, ShapesAreConsistent) {
  for (auto [n, p, task] : std::vector<std::tuple<int, double, Task>>{{600, 0.35, Task::Pack},
                                                                      {400, 0.3, Task::Cover},
                                                                      {16, 0.5, Task::Count},
                                                                      {800, 0.4, Task::PackPseudo}}) {
    const auto e = parameter_policy(n, p, task);
    EXPECT_NO_THROW(e.validate());
    EXPECT_EQ(e.m * e.ell + e.s, n);
    EXPECT_GE(e.ell, 2);
    EXPECT_LE(e.t, 64);
    EXPECT_FALSE(e.slack.empty());
  }
}

TEST(Policy, OverridesWin) {
  PolicyOverrides ov;
  ov.ell = 3;
  ov.s = 31;
  ov.t = 5;
  ov.alpha = 4.0;
  const auto e = parameter_policy(400, 0.3, Task::Pack, ov);
  EXPECT_EQ(e.ell, 3);
  EXPECT_EQ(e.t, 5);
  EXPECT_DOUBLE_EQ(e.alpha, 4.0);
  EXPECT_EQ((400 - e.s) % 3, 0);
}

TEST(Policy, AdjustSMakesBlocksEqual) {
  for (int n : {50, 97, 400})
    for (int ell : {2, 3, 5, 7})
      for (int s : {1, 5, 12}) {
        const int t = adjust_s(n, ell, s);
        EXPECT_EQ((n - t) % ell, 0);
        EXPECT_GE(t, 1);
      }
}

TEST(Policy, ClassProbabilitiesMatchArcCounts) {
  // Interior arcs of D_n(V): (ℓ-1) m^2; exterior: (s + m)^2 minus V0 loops.
  for (auto [n, ell, s] : std::vector<std::tuple<int, int, int>>{{100, 3, 10}, {61, 4, 9}, {400, 2, 40}}) {
    const int m = (n - s) / ell;
    const double pairs = static_cast<double>(n) * (n - 1);
    EXPECT_NEAR(interior_probability(n, ell, s), (ell - 1.0) * m * m / pairs, 1e-12);
    EXPECT_NEAR(exterior_probability(n, ell, s), ((s + m) * (s + m) - s) / pairs, 1e-12);
  }
}

TEST(Assign, PackSubdigraphsPartitionTheArcs) {
  const auto d = sample_dnp(120, 0.3, 3);
  ExperimentParams ep;
  ep.task = Task::Pack;
  ep.n = 120;
  ep.p = 0.3;
  ep.ell = 3;
  ep.s = 12;
  ep.m = 36;
  ep.t = 9;
  BalanceReport bal;
  const auto parts = sample_partitions(d, ep, 5, &bal);
  const auto asg = assign_edges(d, parts, AssignMode::Pack, 3.0, 7);
  const auto& as = asg.assignment;
  for (std::size_t e = 0; e < as.arcs.size(); ++e) {
    const int h = as.chosen[e];
    ASSERT_GE(h, 0);
    const auto a = as.A(e), b = as.B(e);
    if (!a.empty() || !b.empty())
      EXPECT_TRUE(std::count(a.begin(), a.end(), h) + std::count(b.begin(), b.end(), h) == 1);
    for (int i = 0; i < static_cast<int>(asg.subdigraphs.size()); ++i)
      EXPECT_EQ(asg.subdigraphs[i].has_arc(as.arcs[e].from, as.arcs[e].to), i == h);
  }
  std::multiset<ArcKey> seen;
  for (const auto& sub : asg.subdigraphs)
    for (const Arc& a : sub.arcs()) seen.insert({a.from, a.to});
  std::multiset<ArcKey> all;
  for (const Arc& a : d.arcs()) all.insert({a.from, a.to});
  EXPECT_EQ(seen, all);
}

TEST(Assign, CoverPutsEveryListedArcInteriorOnce) {
  const auto d = sample_dnp(100, 0.3, 4);
  std::vector<PartitionScheme> parts;
  for (int i = 0; i < 10; ++i) parts.push_back(make_partition(100, 4, 8, derive_seed(4, "p", i)));
  const auto asg = assign_edges(d, parts, AssignMode::Cover, 2.0, 9);
  const auto& as = asg.assignment;
  std::int64_t unplaced = 0;
  for (std::size_t e = 0; e < as.arcs.size(); ++e) {
    const Arc a = as.arcs[e];
    int interior_hits = 0;
    for (int i = 0; i < 10; ++i) {
      if (!asg.subdigraphs[i].has_arc(a.from, a.to)) continue;
      const auto cls = classify_edge(parts[i], a.from, a.to);
      ASSERT_NE(cls, EdgeClass::Absent);
      interior_hits += cls == EdgeClass::Interior;
    }
    for (int i : as.B(e)) EXPECT_TRUE(asg.subdigraphs[i].has_arc(a.from, a.to));
    if (as.A(e).empty()) {
      ++unplaced;
      EXPECT_EQ(interior_hits, 0);
    } else {
      EXPECT_EQ(interior_hits, 1);
    }
  }
  EXPECT_EQ(unplaced, as.unplaced);
}

TEST(Assign, BalanceOnTypicalPartitions) {
  const auto d = sample_dnp(300, 0.3, 2);
  ExperimentParams e = parameter_policy(300, 0.3, Task::Pack);
  BalanceReport bal;
  EXPECT_NO_THROW(sample_partitions(d, e, 11, &bal));
  EXPECT_TRUE(bal.ok);
  EXPECT_NEAR(bal.expected_a, e.t * interior_probability(300, e.ell, e.s), 1e-9);
}

TEST(PathSystems, ChainFollowsMatchings) {
  const auto v = make_partition(11, 3, 2, 1);
  std::vector<std::vector<int>> ident(2, {0, 1, 2});
  const auto sys = chain_matchings(v, ident);
  ASSERT_EQ(sys.size(), 3);
  for (int a = 0; a < 3; ++a)
    for (int j = 1; j <= 3; ++j) EXPECT_EQ(sys.paths[a][j - 1], v.block(j)[a]);
  EXPECT_TRUE(verify_system(v, sys));
}

TEST(PathSystems, DisjointSystemsAreValid) {
  const auto d = sample_dnp(150, 0.5, 6);
  const auto v = make_partition(150, 4, 14, 6);
  const auto layers = layers_of(d, v);
  const auto res = build_path_systems(v, layers, -1, 6);
  ASSERT_GT(res.L, 0);
  int lo = 1 << 30;
  for (int c : res.layer_matchings) lo = std::min(lo, c);
  EXPECT_EQ(res.L, lo);
  std::set<ArcKey> used;
  for (const auto& sys : res.systems) {
    EXPECT_TRUE(verify_system(v, sys, d));
    for (const auto& path : sys.paths)
      for (std::size_t i = 0; i + 1 < path.size(); ++i) EXPECT_TRUE(used.insert({path[i], path[i + 1]}).second);
  }
}

TEST(PathSystems, CoveringSystemsCoverTheLayers) {
  const auto d = sample_dnp(160, 0.4, 8);
  const auto v = make_partition(160, 4, 16, 8);
  const auto sub = sample_sub(d, 0.5, 3);
  const auto res = build_covering_systems(v, layers_of(sub, v), layers_of(d, v), 8);
  ASSERT_FALSE(res.completion_failed);
  std::set<ArcKey> used;
  for (const auto& sys : res.systems) {
    EXPECT_TRUE(verify_system(v, sys, d));
    for (const auto& path : sys.paths)
      for (std::size_t i = 0; i + 1 < path.size(); ++i) used.insert({path[i], path[i + 1]});
  }
  std::int64_t missed = 0;
  for (const Arc& a : arcs_of_class(sub, v, EdgeClass::Interior).arcs()) missed += used.count({a.from, a.to}) == 0;
  EXPECT_EQ(missed, res.deferred);
}

TEST(Pack, CyclesAreHamiltonianAndDisjoint) {
  const auto d = sample_dnp(250, 0.5, 12);
  const auto params = parameter_policy(250, 0.5, Task::Pack);
  const auto rep = pack(d, params, 12);
  EXPECT_TRUE(rep.audit.ok);
  EXPECT_GT(rep.achieved(), 0);
  for (const auto& c : rep.cycles) EXPECT_TRUE(verify_cycle(d, c));
  const auto ms = arc_multiset(rep.cycles);
  EXPECT_EQ(std::set<ArcKey>(ms.begin(), ms.end()).size(), ms.size());
}

TEST(Pack, ThreadCountDoesNotChangeResults) {
  const auto d = sample_dnp(200, 0.5, 13);
  const auto params = parameter_policy(200, 0.5, Task::Pack);
  RunOptions one;
  one.jobs = 1;
  RunOptions many;
  many.jobs = 4;
  EXPECT_EQ(pack(d, params, 13, one).cycles, pack(d, params, 13, many).cycles);
}

TEST(Cover, EveryArcIsCovered) {
  const auto d = sample_dnp(150, 0.4, 21);
  const auto params = parameter_policy(150, 0.4, Task::Cover);
  const auto rep = cover(d, params, 21);
  EXPECT_TRUE(rep.audit.ok);
  std::set<ArcKey> used;
  for (const auto& c : rep.cycles) {
    EXPECT_TRUE(verify_cycle(d, c));
    for (const Arc& a : c.arcs()) used.insert({a.from, a.to});
  }
  for (const Arc& a : d.arcs()) EXPECT_TRUE(used.count({a.from, a.to}));
  EXPECT_TRUE(rep.uncovered.empty());
}

TEST(Count, ExhaustiveCountMatchesTemplateOracle) {
  const int n = 10;
  const auto d = sample_dnp(n, 0.6, 3);
  const auto params = parameter_policy(n, 0.6, Task::Count);
  const auto cert = count_certify(d, params, 3, 4);
  for (const auto& pc : cert.partitions) {
    if (pc.duplicate || pc.discarded) continue;
    ASSERT_EQ(pc.method, "exhaustive");
    std::vector<std::vector<Vertex>> blocks = pc.blocks;
    const PartitionScheme v(blocks, n);
    EXPECT_EQ(pc.hamilton, BigInt(oracle::ham_cycles(template_part(d, v))));
  }
  ASSERT_TRUE(cert.exact);
  EXPECT_EQ(*cert.exact, BigInt(oracle::ham_cycles(d)));
  EXPECT_LE(cert.certified, *cert.exact);
}

TEST(Count, CompleteLayersCountFactorial) {
  const int n = 16;
  const auto params = parameter_policy(n, 1.0, Task::Count);
  ASSERT_LE(params.m, 8);
  const auto cert = count_certify(Digraph::complete(n), params, 1, 2);
  for (const auto& pc : cert.partitions)
    for (double x : pc.layer_log_pms) EXPECT_NEAR(x, std::lgamma(params.m + 1.0), 1e-9);
}

TEST(Count, CertifiedBoundBelowExact) {
  const auto d = sample_dnp(16, 0.5, 4);
  const auto params = parameter_policy(16, 0.5, Task::Count);
  const auto cert = count_certify(d, params, 4, params.partitions);
  ASSERT_TRUE(cert.exact);
  EXPECT_TRUE(cert.bound_holds);
  EXPECT_LE(cert.log_certified, cert.log_exact + 1e-12);
  BigInt sum = 0;
  for (const auto& pc : cert.partitions)
    if (!pc.duplicate && !pc.discarded) sum += pc.hamilton;
  EXPECT_EQ(sum, cert.certified);
}

TEST(Count, DuplicatePartitionsCountOnce) {
  const auto d = sample_dnp(9, 0.7, 2);
  const auto params = parameter_policy(9, 0.7, Task::Count);
  const auto cert = count_certify(d, params, 2, 40);
  std::set<std::vector<std::vector<Vertex>>> distinct;
  for (const auto& pc : cert.partitions) EXPECT_EQ(pc.duplicate, !distinct.insert(pc.blocks).second);
}

TEST(Certificate, RoundTripsAndCatchesTampering) {
  const auto d = sample_dnp(120, 0.5, 5);
  GraphSource src;
  src.p = 0.5;
  src.seed = 5;
  const auto rep = pack(d, parameter_policy(120, 0.5, Task::Pack), 5);
  ASSERT_GT(rep.achieved(), 1);
  Json cert = make_certificate(d, src, rep);
  EXPECT_TRUE(verify_certificate(cert).ok);

  Json missing = cert;
  const auto first = rep.cycles[1].order;
  auto& arcs = missing["graph"]["arcs"];
  for (std::size_t i = 0; i < arcs.size(); ++i)
    if (arcs[i][0] == first[0] && arcs[i][1] == first[1]) {
      arcs.erase(i);
      break;
    }
  const auto r1 = verify_certificate(missing);
  EXPECT_FALSE(r1.ok);
  ASSERT_TRUE(r1.bad_index);
  EXPECT_EQ(*r1.bad_index, 1);

  Json repeated = cert;
  repeated["cycles"].push_back(repeated["cycles"][0]);
  const auto r2 = verify_certificate(repeated);
  EXPECT_FALSE(r2.ok);
  EXPECT_EQ(*r2.bad_index, rep.achieved());
}

TEST(Certificate, CoverAndCount) {
  const auto d = sample_dnp(100, 0.4, 6);
  GraphSource src;
  const auto rep = cover(d, parameter_policy(100, 0.4, Task::Cover), 6);
  Json cert = make_certificate(d, src, rep);
  EXPECT_TRUE(verify_certificate(cert).ok);
  cert["cycles"].erase(0);
  EXPECT_FALSE(verify_certificate(cert).ok);

  const auto small = sample_dnp(14, 0.5, 6);
  const auto params = parameter_policy(14, 0.5, Task::Count);
  const auto cc = count_certify(small, params, 6, params.partitions);
  Json ccert = make_certificate(small, src, cc);
  EXPECT_TRUE(verify_certificate(ccert).ok);
  for (auto& part : ccert["partitions"])
    if (!part["duplicate"].get<bool>() && part["hamilton"] != "0") {
      part["hamilton"] = (BigInt(part["hamilton"].get<std::string>()) + 1).str();
      break;
    }
  EXPECT_FALSE(verify_certificate(ccert).ok);
}
