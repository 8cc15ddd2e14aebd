#include "hampack/partition.hpp"

#include <numeric>
#include <string>

#include "hampack/error.hpp"

namespace hampack {

PartitionScheme::PartitionScheme(const std::vector<std::vector<Vertex>>& blocks, int n) : n_(n) {
  if (blocks.size() < 3) throw InvalidInput("an (l,s)-partition needs V0 and at least two further blocks");
  ell_ = static_cast<int>(blocks.size()) - 1;
  s_ = static_cast<int>(blocks[0].size());
  m_ = static_cast<int>(blocks[1].size());
  block_of_.assign(static_cast<std::size_t>(n), -1);
  for (int j = 0; j <= ell_; ++j) {
    if (j >= 1 && static_cast<int>(blocks[j].size()) != m_)
      throw InvalidInput("blocks V1..Vl must share one size");
    for (Vertex v : blocks[j]) {
      if (v < 0 || v >= n) throw InvalidInput("partition vertex out of range");
      if (block_of_[v] != -1) throw InvalidInput("vertex " + std::to_string(v) + " in two blocks");
      block_of_[v] = j;
      order_.push_back(v);
    }
  }
  if (static_cast<int>(order_.size()) != n) throw InvalidInput("partition blocks do not cover every vertex");
  if (s_ < 1 || m_ < 1) throw InvalidInput("partition needs s >= 1 and m >= 1");
}

std::span<const Vertex> PartitionScheme::block(int j) const {
  if (j == 0) return std::span<const Vertex>(order_).subspan(0, static_cast<std::size_t>(s_));
  return std::span<const Vertex>(order_).subspan(static_cast<std::size_t>(s_ + (j - 1) * m_), static_cast<std::size_t>(m_));
}

Bitset PartitionScheme::block_set(int j) const {
  Bitset set(n_);
  for (Vertex v : block(j)) set.set(v);
  return set;
}

PartitionScheme make_partition(int n, int ell, int s, Seed seed) {
  if (ell < 2) throw InvalidParameter("partition needs ell >= 2");
  if (s < 1) throw InvalidParameter("partition needs s >= 1");
  if (n - s < ell || (n - s) % ell != 0)
    throw InvalidParameter("n - s = " + std::to_string(n - s) + " is not a positive multiple of ell = " + std::to_string(ell));
  const int m = (n - s) / ell;
  std::vector<Vertex> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  CounterRng rng(derive_seed(seed, "partition"));
  rng.shuffle(perm.begin(), perm.end());
  std::vector<std::vector<Vertex>> blocks(static_cast<std::size_t>(ell + 1));
  blocks[0].assign(perm.begin(), perm.begin() + s);
  for (int j = 1; j <= ell; ++j) {
    const auto first = perm.begin() + s + (j - 1) * m;
    blocks[j].assign(first, first + m);
  }
  return PartitionScheme(blocks, n);
}

EdgeClass classify_edge(const PartitionScheme& v, Vertex from, Vertex to) {
  const int bu = v.block_of(from);
  const int bv = v.block_of(to);
  if (bu >= 1 && bu <= v.ell() - 1 && bv == bu + 1) return EdgeClass::Interior;
  if ((bu == 0 || bu == v.ell()) && (bv == 0 || bv == 1)) return EdgeClass::Exterior;
  return EdgeClass::Absent;
}

std::int64_t interior_arc_count(int ell, int m) {
  return static_cast<std::int64_t>(ell - 1) * m * m;
}

std::int64_t exterior_arc_count(int s, int m) {
  return static_cast<std::int64_t>(m) * m + 2LL * s * m + static_cast<std::int64_t>(s) * (s - 1);
}

Digraph arcs_of_class(const Digraph& d, const PartitionScheme& v, EdgeClass cls) {
  Digraph out(d.n());
  for (Vertex u = 0; u < d.n(); ++u)
    d.out(u).for_each([&](int w) {
      if (classify_edge(v, u, w) == cls) out.add_arc(u, w);
    });
  return out;
}

}  // namespace hampack
