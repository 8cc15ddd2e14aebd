// Brute-force oracles used by the unit and acceptance tests. They share no
// code with the library kernels they check.
#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "hampack/digraph.hpp"
#include "hampack/flow.hpp"

namespace oracle {

// Directed Hamilton cycles by enumerating permutations that fix vertex 0.
inline std::uint64_t ham_cycles(const hampack::Digraph& d) {
  const int n = d.n();
  if (n < 2) return 0;
  std::vector<int> rest(static_cast<std::size_t>(n - 1));
  std::iota(rest.begin(), rest.end(), 1);
  std::uint64_t count = 0;
  do {
    int prev = 0;
    bool ok = true;
    for (int v : rest) {
      if (!d.has_arc(prev, v)) {
        ok = false;
        break;
      }
      prev = v;
    }
    if (ok && d.has_arc(prev, 0)) ++count;
  } while (std::next_permutation(rest.begin(), rest.end()));
  return count;
}

// Permanent of the biadjacency matrix by enumerating permutations.
inline std::uint64_t permanent(const hampack::BipartiteGraph& g) {
  const int n = g.left_size();
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::uint64_t count = 0;
  do {
    bool ok = true;
    for (int a = 0; a < n && ok; ++a) ok = g.has_edge(a, perm[static_cast<std::size_t>(a)]);
    if (ok) ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return count;
}

// Minimum s-t cut capacity over all 2^(nodes-2) cuts.
inline std::int64_t min_cut(const hampack::FlowNetwork& net) {
  const int n = net.nodes();
  std::vector<int> inner;
  for (int v = 0; v < n; ++v)
    if (v != net.source() && v != net.sink()) inner.push_back(v);
  std::int64_t best = -1;
  const std::uint64_t subsets = std::uint64_t{1} << inner.size();
  for (std::uint64_t mask = 0; mask < subsets; ++mask) {
    std::vector<char> side(static_cast<std::size_t>(n), 0);
    side[static_cast<std::size_t>(net.source())] = 1;
    for (std::size_t i = 0; i < inner.size(); ++i)
      if ((mask >> i) & 1U) side[static_cast<std::size_t>(inner[i])] = 1;
    std::int64_t cap = 0;
    for (const auto& a : net.arcs())
      if (side[static_cast<std::size_t>(a.from)] && !side[static_cast<std::size_t>(a.to)]) cap += a.capacity;
    if (best < 0 || cap < best) best = cap;
  }
  return best;
}

inline std::uint64_t factorial(int n) {
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

}  // namespace oracle
