#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "hampack/bitset.hpp"

namespace hampack {

using Vertex = int;

struct Arc {
  Vertex from = 0;
  Vertex to = 0;
  friend auto operator<=>(const Arc&, const Arc&) = default;
};

/// Directed graph on vertices 0..n-1 with bitset adjacency in both
/// directions. Self-loops are rejected; edge_count() is kept in sync.
class Digraph {
 public:
  Digraph() = default;
  explicit Digraph(int n);

  static Digraph complete(int n);
  /// Directed cycle following `order` (arcs order[i] -> order[i+1], wrapping).
  static Digraph from_cycle(std::span<const Vertex> order, int n);
  static Digraph from_arcs(int n, std::span<const Arc> arcs);

  int n() const { return n_; }
  std::int64_t edge_count() const { return edge_count_; }

  bool has_arc(Vertex u, Vertex v) const { return out_[u].test(v); }
  /// Returns true if the arc was newly inserted.
  bool add_arc(Vertex u, Vertex v);
  bool remove_arc(Vertex u, Vertex v);

  const Bitset& out(Vertex u) const { return out_[u]; }
  const Bitset& in(Vertex v) const { return in_[v]; }
  int out_degree(Vertex u) const { return out_[u].count(); }
  int in_degree(Vertex v) const { return in_[v].count(); }

  /// e(X, Y): arcs with tail in X and head in Y.
  std::int64_t arcs_between(const Bitset& from, const Bitset& to) const;
  /// e(X): arcs with both endpoints in X.
  std::int64_t arcs_within(const Bitset& set) const { return arcs_between(set, set); }

  std::vector<Arc> arcs() const;
  std::vector<std::vector<Vertex>> out_lists() const;
  std::vector<std::vector<Vertex>> in_lists() const;

  /// Digraph on `vertices` (relabelled 0..k-1 in the given order).
  Digraph induced(std::span<const Vertex> vertices) const;

  friend bool operator==(const Digraph& a, const Digraph& b) { return a.n_ == b.n_ && a.out_ == b.out_; }

 private:
  int n_ = 0;
  std::int64_t edge_count_ = 0;
  std::vector<Bitset> out_;
  std::vector<Bitset> in_;
};

/// Bipartite graph with parts A = 0..left-1 and B = 0..right-1; edges are
/// stored as per-left-vertex bitsets over B with a mirrored right view.
class BipartiteGraph {
 public:
  BipartiteGraph() = default;
  BipartiteGraph(int left_size, int right_size);

  static BipartiteGraph complete(int left_size, int right_size);

  int left_size() const { return left_; }
  int right_size() const { return right_; }
  std::int64_t edge_count() const { return edge_count_; }

  bool has_edge(int a, int b) const { return adj_[a].test(b); }
  bool add_edge(int a, int b);
  bool remove_edge(int a, int b);

  const Bitset& left_neighbors(int a) const { return adj_[a]; }
  const Bitset& right_neighbors(int b) const { return radj_[b]; }
  int left_degree(int a) const { return adj_[a].count(); }
  int right_degree(int b) const { return radj_[b].count(); }

  int min_degree() const;
  int max_degree() const;
  /// True iff every vertex on both sides has degree exactly r.
  bool is_regular(int r) const;

  /// e(X, Y) for X subset of A, Y subset of B.
  std::int64_t edges_between(const Bitset& left_set, const Bitset& right_set) const;

  std::vector<std::pair<int, int>> edges() const;
  std::vector<std::vector<int>> left_lists() const;

  /// Edge-set difference: this minus other (same part sizes).
  BipartiteGraph minus(const BipartiteGraph& other) const;
  /// Edge-set union.
  BipartiteGraph united(const BipartiteGraph& other) const;

  friend bool operator==(const BipartiteGraph& a, const BipartiteGraph& b) {
    return a.left_ == b.left_ && a.right_ == b.right_ && a.adj_ == b.adj_;
  }

 private:
  int left_ = 0;
  int right_ = 0;
  std::int64_t edge_count_ = 0;
  std::vector<Bitset> adj_;
  std::vector<Bitset> radj_;
};

/// Edges of D from `tails` to `heads`, with orientation dropped: left index i
/// is tails[i], right index j is heads[j].
BipartiteGraph bipartite_between(const Digraph& d, std::span<const Vertex> tails,
                                 std::span<const Vertex> heads);

}  // namespace hampack
