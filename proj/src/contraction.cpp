#include "hampack/contraction.hpp"

#include <algorithm>

#include "hampack/error.hpp"

namespace hampack {

PairList PathSystem::endpoints() const {
  PairList list;
  list.pairs.reserve(paths.size());
  for (const auto& path : paths) {
    if (path.empty()) throw InvalidInput("path system contains an empty path");
    list.pairs.emplace_back(path.front(), path.back());
  }
  return list;
}

HamCycle HamCycle::canonical() const {
  HamCycle c = *this;
  if (!c.order.empty()) {
    const auto smallest = std::min_element(c.order.begin(), c.order.end());
    std::rotate(c.order.begin(), smallest, c.order.end());
  }
  return c;
}

std::vector<Arc> HamCycle::arcs() const {
  std::vector<Arc> out;
  out.reserve(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) out.push_back({order[i], order[(i + 1) % order.size()]});
  return out;
}

Digraph contract(const Digraph& d, const PairList& pairs, std::span<const Vertex> v0) {
  const int n = d.n();
  const int s = static_cast<int>(v0.size());
  const int m = pairs.size();
  // Index of every participating vertex in the contracted graph, or -1.
  std::vector<int> as_tail(static_cast<std::size_t>(n), -1);  // x_i or V0 vertex
  std::vector<int> as_head(static_cast<std::size_t>(n), -1);  // w_i or V0 vertex
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  auto claim = [&](Vertex v) {
    if (v < 0 || v >= n) throw InvalidInput("contraction vertex out of range");
    if (used[v]) throw InvalidInput("contraction endpoints overlap at vertex " + std::to_string(v));
    used[v] = 1;
  };
  for (int i = 0; i < s; ++i) {
    claim(v0[i]);
    as_tail[v0[i]] = i;
    as_head[v0[i]] = i;
  }
  for (int i = 0; i < m; ++i) {
    const auto [w, x] = pairs.pairs[i];
    claim(w);
    if (x != w) claim(x);
    as_head[w] = s + i;
    as_tail[x] = s + i;
  }
  Digraph c(s + m);
  for (Vertex u = 0; u < n; ++u) {
    const int from = as_tail[u];
    if (from < 0) continue;
    d.out(u).for_each([&](int v) {
      const int to = as_head[v];
      if (to >= 0 && to != from) c.add_arc(from, to);
    });
  }
  return c;
}

HamCycle lift_cycle(const HamCycle& contracted, const PathSystem& system, std::span<const Vertex> v0) {
  const int s = static_cast<int>(v0.size());
  if (contracted.size() != s + system.size())
    throw InternalInvariantViolation("contracted cycle length " + std::to_string(contracted.size()) +
                                     " does not match |V0| + m = " + std::to_string(s + system.size()));
  HamCycle lifted;
  for (Vertex c : contracted.order) {
    if (c < 0 || c >= s + system.size()) throw InternalInvariantViolation("contracted vertex out of range");
    if (c < s) {
      lifted.order.push_back(v0[c]);
    } else {
      const auto& path = system.paths[c - s];
      lifted.order.insert(lifted.order.end(), path.begin(), path.end());
    }
  }
  return lifted;
}

std::optional<std::string> explain_cycle_failure(const Digraph& d, const HamCycle& cycle) {
  const int n = d.n();
  if (n < 2) return "a Hamilton cycle needs at least two vertices";
  if (cycle.size() != n) return "cycle has " + std::to_string(cycle.size()) + " vertices, graph has " + std::to_string(n);
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (Vertex v : cycle.order) {
    if (v < 0 || v >= n) return "vertex " + std::to_string(v) + " out of range";
    if (seen[v]) return "vertex " + std::to_string(v) + " repeated";
    seen[v] = 1;
  }
  for (int i = 0; i < n; ++i) {
    const Vertex u = cycle.order[i];
    const Vertex v = cycle.order[(i + 1) % n];
    if (!d.has_arc(u, v)) return "missing arc " + std::to_string(u) + "->" + std::to_string(v);
  }
  return std::nullopt;
}

bool verify_cycle(const Digraph& d, const HamCycle& cycle) { return !explain_cycle_failure(d, cycle).has_value(); }

bool verify_system(const PartitionScheme& v, const PathSystem& system) {
  if (system.size() != v.m()) return false;
  std::vector<char> seen(static_cast<std::size_t>(v.n()), 0);
  for (const auto& path : system.paths) {
    if (static_cast<int>(path.size()) != v.ell()) return false;
    for (int j = 0; j < v.ell(); ++j) {
      const Vertex x = path[j];
      if (x < 0 || x >= v.n() || seen[x]) return false;
      seen[x] = 1;
      if (v.block_of(x) != j + 1) return false;
      if (j + 1 < v.ell() && classify_edge(v, x, path[j + 1]) != EdgeClass::Interior) return false;
    }
  }
  return true;
}

bool verify_system(const PartitionScheme& v, const PathSystem& system, const Digraph& d) {
  if (!verify_system(v, system)) return false;
  for (const auto& path : system.paths)
    for (std::size_t j = 0; j + 1 < path.size(); ++j)
      if (!d.has_arc(path[j], path[j + 1])) return false;
  return true;
}

}  // namespace hampack
