#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hampack/digraph.hpp"
#include "hampack/rng.hpp"

namespace hampack {

/// An (ℓ, s)-partition (V0, V1, ..., Vℓ) of 0..n-1 with |V0| = s and
/// |Vj| = m for j >= 1. Blocks are stored as contiguous ranges of a vertex
/// permutation, so block(j) is a span into that permutation.
class PartitionScheme {
 public:
  PartitionScheme() = default;
  /// blocks[0] is V0; blocks[1..ℓ] must all have the same size.
  explicit PartitionScheme(const std::vector<std::vector<Vertex>>& blocks, int n);

  int n() const { return n_; }
  int ell() const { return ell_; }
  int s() const { return s_; }
  int m() const { return m_; }

  std::span<const Vertex> block(int j) const;
  int block_of(Vertex v) const { return block_of_[v]; }
  std::span<const Vertex> order() const { return order_; }

  /// Indicator bitset of block j.
  Bitset block_set(int j) const;

  friend bool operator==(const PartitionScheme&, const PartitionScheme&) = default;

 private:
  int n_ = 0;
  int ell_ = 0;
  int s_ = 0;
  int m_ = 0;
  std::vector<Vertex> order_;
  std::vector<int> block_of_;
};

/// Uniformly random (ℓ, s)-partition of 0..n-1; requires ell >= 2, s >= 1 and
/// (n - s) divisible by ell with m >= 1.
PartitionScheme make_partition(int n, int ell, int s, Seed seed);

enum class EdgeClass { Interior, Exterior, Absent };

/// Classification of the arc u -> v in the template digraph D_n(V):
/// Interior for Vj -> Vj+1 (1 <= j <= ℓ-1); Exterior for V0 -> V0 ∪ V1 and
/// Vℓ -> V0 ∪ V1; Absent otherwise.
EdgeClass classify_edge(const PartitionScheme& v, Vertex from, Vertex to);

/// Closed-form sizes of the two arc classes of D_n(V).
std::int64_t interior_arc_count(int ell, int m);
std::int64_t exterior_arc_count(int s, int m);

/// Arcs of D whose class under V is `cls`, as a digraph on the same vertex set.
Digraph arcs_of_class(const Digraph& d, const PartitionScheme& v, EdgeClass cls);

}  // namespace hampack
