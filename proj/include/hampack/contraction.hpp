#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hampack/digraph.hpp"
#include "hampack/partition.hpp"

namespace hampack {

/// Ordered pairs (w_i, x_i) standing for directed w_i -> x_i paths. A pair may
/// be degenerate (w_i == x_i) for a one-vertex path; otherwise all endpoints
/// across pairs are distinct.
struct PairList {
  std::vector<std::pair<Vertex, Vertex>> pairs;
  int size() const { return static_cast<int>(pairs.size()); }
};

/// Vertex-disjoint directed paths. For a matching path system over an
/// (ℓ, s)-partition, path i visits V1, V2, ..., Vℓ in order.
struct PathSystem {
  std::vector<std::vector<Vertex>> paths;

  int size() const { return static_cast<int>(paths.size()); }
  /// (first, last) vertex of every path.
  PairList endpoints() const;
};

/// A Hamilton cycle as a cyclic vertex order.
struct HamCycle {
  std::vector<Vertex> order;

  int size() const { return static_cast<int>(order.size()); }
  /// Rotated so the smallest vertex comes first; direction is preserved.
  HamCycle canonical() const;
  std::vector<Arc> arcs() const;
  friend bool operator==(const HamCycle&, const HamCycle&) = default;
};

/// The auxiliary digraph D(M, V0). Vertices 0..|V0|-1 are V0 in the given
/// order; vertex |V0| + i is the contracted pair i. Arcs x_i -> w_i (loops on
/// contracted vertices) are dropped.
Digraph contract(const Digraph& d, const PairList& pairs, std::span<const Vertex> v0);

/// Replaces each contracted vertex of `contracted` by its full path.
HamCycle lift_cycle(const HamCycle& contracted, const PathSystem& system, std::span<const Vertex> v0);

/// True iff `cycle` is a permutation of V(D) whose consecutive arcs (with
/// wraparound) all exist in D. A cycle needs at least two vertices.
bool verify_cycle(const Digraph& d, const HamCycle& cycle);

/// Diagnostic form of verify_cycle; nullopt when valid.
std::optional<std::string> explain_cycle_failure(const Digraph& d, const HamCycle& cycle);

/// True iff `system` is a matching path system of V: m disjoint paths, path i
/// runs through V1..Vℓ one vertex per block, covering V1 ∪ ... ∪ Vℓ.
bool verify_system(const PartitionScheme& v, const PathSystem& system);
/// As above, and additionally every path arc is an arc of D.
bool verify_system(const PartitionScheme& v, const PathSystem& system, const Digraph& d);

}  // namespace hampack
