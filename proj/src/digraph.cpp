#include "hampack/digraph.hpp"

#include <algorithm>
#include <string>

#include "hampack/error.hpp"

namespace hampack {

Digraph::Digraph(int n) : n_(n), out_(static_cast<std::size_t>(n), Bitset(n)), in_(static_cast<std::size_t>(n), Bitset(n)) {
  if (n < 0) throw InvalidParameter("digraph vertex count must be non-negative");
}

Digraph Digraph::complete(int n) {
  Digraph d(n);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = 0; v < n; ++v)
      if (u != v) d.add_arc(u, v);
  return d;
}

Digraph Digraph::from_cycle(std::span<const Vertex> order, int n) {
  Digraph d(n);
  const auto k = order.size();
  for (std::size_t i = 0; i < k; ++i) d.add_arc(order[i], order[(i + 1) % k]);
  return d;
}

Digraph Digraph::from_arcs(int n, std::span<const Arc> arcs) {
  Digraph d(n);
  for (const Arc& a : arcs) d.add_arc(a.from, a.to);
  return d;
}

bool Digraph::add_arc(Vertex u, Vertex v) {
  if (u < 0 || v < 0 || u >= n_ || v >= n_) throw InvalidInput("arc endpoint out of range");
  if (u == v) throw InvalidInput("self-loop at vertex " + std::to_string(u));
  if (out_[u].test(v)) return false;
  out_[u].set(v);
  in_[v].set(u);
  ++edge_count_;
  return true;
}

bool Digraph::remove_arc(Vertex u, Vertex v) {
  if (!out_[u].test(v)) return false;
  out_[u].reset(v);
  in_[v].reset(u);
  --edge_count_;
  return true;
}

std::int64_t Digraph::arcs_between(const Bitset& from, const Bitset& to) const {
  std::int64_t total = 0;
  from.for_each([&](int u) { total += out_[u].count_and(to); });
  return total;
}

std::vector<Arc> Digraph::arcs() const {
  std::vector<Arc> result;
  result.reserve(static_cast<std::size_t>(edge_count_));
  for (Vertex u = 0; u < n_; ++u) out_[u].for_each([&](int v) { result.push_back({u, v}); });
  return result;
}

std::vector<std::vector<Vertex>> Digraph::out_lists() const {
  std::vector<std::vector<Vertex>> lists(static_cast<std::size_t>(n_));
  for (Vertex u = 0; u < n_; ++u) lists[u] = out_[u].to_vector();
  return lists;
}

std::vector<std::vector<Vertex>> Digraph::in_lists() const {
  std::vector<std::vector<Vertex>> lists(static_cast<std::size_t>(n_));
  for (Vertex v = 0; v < n_; ++v) lists[v] = in_[v].to_vector();
  return lists;
}

Digraph Digraph::induced(std::span<const Vertex> vertices) const {
  const int k = static_cast<int>(vertices.size());
  Digraph sub(k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      if (i != j && has_arc(vertices[i], vertices[j])) sub.add_arc(i, j);
  return sub;
}

BipartiteGraph::BipartiteGraph(int left_size, int right_size)
    : left_(left_size),
      right_(right_size),
      adj_(static_cast<std::size_t>(left_size), Bitset(right_size)),
      radj_(static_cast<std::size_t>(right_size), Bitset(left_size)) {
  if (left_size < 0 || right_size < 0) throw InvalidParameter("bipartite part sizes must be non-negative");
}

BipartiteGraph BipartiteGraph::complete(int left_size, int right_size) {
  BipartiteGraph g(left_size, right_size);
  for (int a = 0; a < left_size; ++a)
    for (int b = 0; b < right_size; ++b) g.add_edge(a, b);
  return g;
}

bool BipartiteGraph::add_edge(int a, int b) {
  if (a < 0 || b < 0 || a >= left_ || b >= right_) throw InvalidInput("bipartite edge endpoint out of range");
  if (adj_[a].test(b)) return false;
  adj_[a].set(b);
  radj_[b].set(a);
  ++edge_count_;
  return true;
}

bool BipartiteGraph::remove_edge(int a, int b) {
  if (!adj_[a].test(b)) return false;
  adj_[a].reset(b);
  radj_[b].reset(a);
  --edge_count_;
  return true;
}

int BipartiteGraph::min_degree() const {
  if (left_ == 0 && right_ == 0) return 0;
  int best = left_ + right_;
  for (int a = 0; a < left_; ++a) best = std::min(best, left_degree(a));
  for (int b = 0; b < right_; ++b) best = std::min(best, right_degree(b));
  return best;
}

int BipartiteGraph::max_degree() const {
  int best = 0;
  for (int a = 0; a < left_; ++a) best = std::max(best, left_degree(a));
  for (int b = 0; b < right_; ++b) best = std::max(best, right_degree(b));
  return best;
}

bool BipartiteGraph::is_regular(int r) const {
  for (int a = 0; a < left_; ++a)
    if (left_degree(a) != r) return false;
  for (int b = 0; b < right_; ++b)
    if (right_degree(b) != r) return false;
  return true;
}

std::int64_t BipartiteGraph::edges_between(const Bitset& left_set, const Bitset& right_set) const {
  std::int64_t total = 0;
  left_set.for_each([&](int a) { total += adj_[a].count_and(right_set); });
  return total;
}

std::vector<std::pair<int, int>> BipartiteGraph::edges() const {
  std::vector<std::pair<int, int>> result;
  result.reserve(static_cast<std::size_t>(edge_count_));
  for (int a = 0; a < left_; ++a) adj_[a].for_each([&](int b) { result.emplace_back(a, b); });
  return result;
}

std::vector<std::vector<int>> BipartiteGraph::left_lists() const {
  std::vector<std::vector<int>> lists(static_cast<std::size_t>(left_));
  for (int a = 0; a < left_; ++a) lists[a] = adj_[a].to_vector();
  return lists;
}

BipartiteGraph BipartiteGraph::minus(const BipartiteGraph& other) const {
  if (other.left_ != left_ || other.right_ != right_) throw InvalidInput("bipartite part sizes differ");
  BipartiteGraph g(left_, right_);
  for (int a = 0; a < left_; ++a) {
    Bitset row = adj_[a];
    row.subtract(other.adj_[a]);
    row.for_each([&](int b) { g.add_edge(a, b); });
  }
  return g;
}

BipartiteGraph BipartiteGraph::united(const BipartiteGraph& other) const {
  if (other.left_ != left_ || other.right_ != right_) throw InvalidInput("bipartite part sizes differ");
  BipartiteGraph g = *this;
  for (int a = 0; a < left_; ++a) other.adj_[a].for_each([&](int b) { g.add_edge(a, b); });
  return g;
}

BipartiteGraph bipartite_between(const Digraph& d, std::span<const Vertex> tails, std::span<const Vertex> heads) {
  BipartiteGraph g(static_cast<int>(tails.size()), static_cast<int>(heads.size()));
  for (std::size_t i = 0; i < tails.size(); ++i)
    for (std::size_t j = 0; j < heads.size(); ++j)
      if (d.has_arc(tails[i], heads[j])) g.add_edge(static_cast<int>(i), static_cast<int>(j));
  return g;
}

}  // namespace hampack
