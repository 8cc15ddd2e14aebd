#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "hampack/pseudorandom.hpp"
#include "hampack/sampling.hpp"

using namespace hampack;

namespace {

// Independent P1 decision straight from the degree sequence.
bool degrees_in_band(const Digraph& d, double lambda, double p) {
  const double np = d.n() * p;
  for (Vertex v = 0; v < d.n(); ++v)
    for (int deg : {d.out_degree(v), d.in_degree(v)})
      if (deg < (1 - lambda) * np || deg > (1 + lambda) * np) return false;
  return true;
}

}  // namespace

TEST(Exponents, StoredAsFractions) {
  EXPECT_DOUBLE_EQ(kExpP2.value(), 8.02);
  EXPECT_DOUBLE_EQ(kExpP2Star.value(), 2.1);
  EXPECT_DOUBLE_EQ(kExpP3.value(), 1.1);
  EXPECT_DOUBLE_EQ(kExpB.value(), 8.05);
  EXPECT_DOUBLE_EQ(kExpLayer.value(), 2.05);
}

TEST(Pseudo, CompleteDigraphPassesDegrees) {
  for (int n : {2, 5, 30}) {
    const auto r = check_pseudorandom(Digraph::complete(n), 0.5, 1.0);
    EXPECT_TRUE(r.p1.passed()) << n;
    EXPECT_EQ(r.p1.verdict, Verdict::ExhaustivePass);
  }
}

TEST(Pseudo, IsolatedVertexIsTheWitness) {
  Digraph d = Digraph::complete(40);
  for (Vertex u = 0; u < 40; ++u)
    if (u != 17) {
      d.remove_arc(u, 17);
      d.remove_arc(17, u);
    }
  const auto r = check_pseudorandom(d, 0.9, 1.0);
  ASSERT_FALSE(r.p1.passed());
  ASSERT_TRUE(r.p1.witness);
  EXPECT_EQ(r.p1.witness->vertex, 17);
  EXPECT_EQ(r.p1.witness->value, 0);
  EXPECT_TRUE(revalidate(d, r.p1));
  EXPECT_EQ(r.p1.label(), "violation");
}

TEST(Pseudo, EmptyDigraphFailsDegrees) {
  const auto r = check_pseudorandom(Digraph(25), 0.5, 0.3);
  EXPECT_FALSE(r.p1.passed());
  EXPECT_FALSE(r.passes());
}

TEST(Pseudo, DenseSampleP3Sampled) {
  const auto d = sample_dnp(500, 0.3, 8);
  PseudoBudget b;
  b.samples = 10'000;
  const auto r = check_pseudorandom(d, 0.2, 0.3, b);
  EXPECT_TRUE(r.p3.passed());
  EXPECT_EQ(r.p3.label(), "sampled-pass(10000)");
  EXPECT_EQ(r.p1.passed(), degrees_in_band(d, 0.2, 0.3));
}

TEST(Pseudo, EnumerationWitnessesRevalidate) {
  // Small dense digraphs: P2's cap allows enumeration and the log^8.02 bound
  // is never met, while a tight λ makes P3 fail on some pair.
  int violations = 0;
  for (Seed s = 1; s <= 6; ++s) {
    const auto d = sample_dnp(14, 0.5, s);
    const auto r = check_pseudorandom(d, 0.01, 0.5);
    for (const auto* c : {&r.p1, &r.p2, &r.p3}) {
      if (c->passed()) continue;
      ++violations;
      EXPECT_TRUE(revalidate(d, *c)) << c->name;
    }
    if (r.p3.method == "enumeration") EXPECT_NE(r.p3.verdict, Verdict::SampledPass);
  }
  EXPECT_GT(violations, 0);
}

TEST(Pseudo, DegreeDecisionMatchesOracle) {
  for (Seed s = 1; s <= 20; ++s) {
    const auto d = sample_dnp(120, 0.4, s);
    for (double lambda : {0.1, 0.2, 0.3})
      EXPECT_EQ(check_pseudorandom(d, lambda, 0.4, {1, 1, s}).p1.passed(), degrees_in_band(d, lambda, 0.4));
  }
}

// n = 500, p = 0.3, λ = 0.25: the band is ±37.5 around 150 with σ ≈ 10.2,
// about 3.66σ, so each sample has ≈ 0.25 expected out-of-band degrees among
// its 1000 and passes with probability ≈ e^-0.25 ≈ 0.78. Not every seed
// passes; the check must agree with the degree oracle on every one.
TEST(Pseudo, DegreeBandOverFiftySeeds) {
  int passed = 0;
  for (Seed s = 1; s <= 50; ++s) {
    const auto d = sample_dnp(500, 0.3, s);
    const bool ok = check_pseudorandom(d, 0.25, 0.3, {1, 1, s}).p1.passed();
    EXPECT_EQ(ok, degrees_in_band(d, 0.25, 0.3));
    passed += ok;
  }
  EXPECT_GE(passed, 30);
  EXPECT_EQ(passed, 41);
}

TEST(Pseudo, CycleGivesNoPrediction) {
  const int n = 60;
  std::vector<Vertex> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  const auto d = Digraph::from_cycle(order, n);
  const auto r = check_thm62_conditions(d, 0.3, 2.0 / n);
  EXPECT_FALSE(r.p1.passed());
  EXPECT_FALSE(r.conditions_hold);
  EXPECT_FALSE(r.predicts_hamiltonian);
  EXPECT_FALSE(r.confirmed);
}

TEST(Pseudo, WideLambdaMakesContractedPropertiesVacuous) {
  const auto d = sample_dnp(300, 0.5, 1);
  PolicyOverrides ov;
  ov.lambda = 0.95;
  const auto params = parameter_policy(300, 0.5, Task::PackPseudo, ov);
  PseudoBudget b;
  b.samples = 2000;
  const auto rep = validate_appendix_lemmas(d, 0.95, params, 5, 1, b);
  ASSERT_EQ(rep.checks.size(), 6u);
  for (int k = 0; k < 3; ++k) EXPECT_EQ(rep.checks[k].passed, 5) << rep.checks[k].property;
  EXPECT_EQ(rep.checks[3].method, "vacuous");
  EXPECT_EQ(rep.checks[5].passed, 5);
}

TEST(Pseudo, PackAuditsPass) {
  const auto d = sample_dnp(300, 0.5, 2);
  const auto rep = pack_pseudorandom(d, 0.2, 2);
  EXPECT_TRUE(rep.audit.ok);
  EXPECT_GT(rep.achieved(), 0);
  std::set<std::pair<int, int>> used;
  for (const auto& c : rep.cycles) {
    EXPECT_TRUE(verify_cycle(d, c));
    for (const Arc& a : c.arcs()) EXPECT_TRUE(used.insert({a.from, a.to}).second);
  }
}
