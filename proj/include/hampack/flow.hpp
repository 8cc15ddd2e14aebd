#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hampack/digraph.hpp"
#include "hampack/rng.hpp"

namespace hampack {

struct FlowArc {
  int from = 0;
  int to = 0;
  std::int64_t capacity = 0;
};

/// Single-source single-sink network with non-negative integral capacities.
/// Arcs into the source or out of the sink are rejected.
class FlowNetwork {
 public:
  FlowNetwork(int nodes, int source, int sink);

  int nodes() const { return nodes_; }
  int source() const { return source_; }
  int sink() const { return sink_; }
  const std::vector<FlowArc>& arcs() const { return arcs_; }

  /// Returns the arc index.
  int add_arc(int from, int to, std::int64_t capacity);

 private:
  int nodes_;
  int source_;
  int sink_;
  std::vector<FlowArc> arcs_;
};

struct FlowResult {
  std::int64_t value = 0;
  /// Integral flow on every arc, indexed like FlowNetwork::arcs().
  std::vector<std::int64_t> flow;
  /// Nodes reachable from the source in the final residual graph; this side
  /// of the partition is a minimum cut.
  std::vector<char> source_side;
};

/// Maximum flow by Dinic's blocking-flow method.
FlowResult max_flow(const FlowNetwork& net);

/// Capacity of the cut (S, V \ S) where S = {v : side[v]}.
std::int64_t cut_capacity(const FlowNetwork& net, const std::vector<char>& side);

/// Host graph G, pre-placed graph H on the same parts (N + N), target degree r.
struct RFactorInstance {
  BipartiteGraph host;
  BipartiteGraph placed;
  int r = 0;
};

struct RFactorResult {
  bool feasible = false;
  /// G' with d_G'(v) + d_H(v) = r everywhere when feasible; otherwise the
  /// partial subgraph carried by the maximum flow.
  BipartiteGraph added;
  std::int64_t flow_value = 0;
  std::int64_t required = 0;
  /// Whether Δ(H) <= r/2 held (the degree hypothesis of the completion lemma).
  bool half_degree_hypothesis = false;
};

/// Completes H to an r-regular graph using edges of G \ H, by an integral
/// flow s -> a (cap r - d_H(a)), a -> b for ab in G \ H (cap 1),
/// b -> t (cap r - d_H(b)). Requires Δ(H) <= r; infeasibility is reported in
/// the result.
RFactorResult complete_to_r_factor(const RFactorInstance& inst);

// Constants of the expansion hypothesis for r-factor completion.
inline constexpr double kLargeSetFraction = 0.25;      // |X|, |Y| >= N/4
inline constexpr double kLargeSetEdgeDivisor = 40.0;   // e(X,Y) >= dN/40
inline constexpr double kDenseSetDegreeFraction = 0.75;// e(X,Y) >= 3d|X|/4
inline constexpr int kExpansionFactor = 2;             // then |Y| >= 2|X|
inline constexpr double kDegreeToFactorRatio = 80.0;   // r <= d/80

struct ExpansionViolation {
  /// 1: large pair too sparse; 2: small X too dense into a small Y; 3: the
  /// mirror of 2 with the roles of A and B swapped.
  int condition = 0;
  std::vector<int> left;
  std::vector<int> right;
  std::int64_t edges = 0;
  double threshold = 0.0;
};

struct ExpansionReport {
  int min_degree = 0;
  /// δ(G) >= d, checked exactly and kept apart from the sampled conditions.
  bool degree_ok = false;
  std::int64_t trials = 0;
  std::vector<ExpansionViolation> violations;
  bool violation_found() const { return !violations.empty(); }
  /// "violation ..." or "no violation in <k> samples"; never a proof.
  std::string summary() const;
};

/// Randomised search for pairs (X, Y) violating the expansion hypothesis.
/// Condition 1 samples set sizes just above N/4; conditions 2 and 3 sample X
/// and take the best Y of size < 2|X| exactly (top neighbours by edge count).
ExpansionReport check_expansion_hypothesis(const BipartiteGraph& g, int d, std::int64_t sample_budget, Seed seed);

/// Recomputes the quantity behind a violation; true iff it still violates.
bool revalidate(const BipartiteGraph& g, int d, const ExpansionViolation& v);

}  // namespace hampack
