#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "hampack/bigint.hpp"
#include "hampack/digraph.hpp"
#include "hampack/rng.hpp"

namespace hampack {

/// Partial injection from left to right vertices.
class Matching {
 public:
  Matching() = default;
  Matching(int left_size, int right_size)
      : left_(static_cast<std::size_t>(left_size), -1), right_(static_cast<std::size_t>(right_size), -1) {}

  int left_size() const { return static_cast<int>(left_.size()); }
  int right_size() const { return static_cast<int>(right_.size()); }
  int size() const { return size_; }
  bool is_perfect() const { return size_ == left_size() && size_ == right_size(); }

  int partner_of_left(int a) const { return left_[a]; }
  int partner_of_right(int b) const { return right_[b]; }

  /// Adds (a, b); both must currently be unmatched.
  void add(int a, int b);
  std::vector<std::pair<int, int>> pairs() const;

  /// Injective, and every pair is an edge of `host`.
  bool valid_in(const BipartiteGraph& host) const;

  friend bool operator==(const Matching&, const Matching&) = default;

 private:
  friend Matching max_matching(const BipartiteGraph&, std::optional<Seed>);
  std::vector<int> left_;
  std::vector<int> right_;
  int size_ = 0;
};

/// Ordered list of perfect matchings of one host graph.
struct MatchingFamily {
  int left_size = 0;
  int right_size = 0;
  std::vector<Matching> matchings;

  int size() const { return static_cast<int>(matchings.size()); }
  /// Union of all matchings as a bipartite graph.
  BipartiteGraph union_graph() const;
};

/// Every member perfect and an edge set of `host`; members pairwise
/// edge-disjoint when `disjoint` is set.
bool verify_family(const BipartiteGraph& host, const MatchingFamily& family, bool disjoint = true);

/// Maximum-cardinality matching (Hopcroft-Karp). A seed shuffles the search
/// order so repeated calls can return different maximum matchings.
Matching max_matching(const BipartiteGraph& g, std::optional<Seed> seed = std::nullopt);

enum class ExtractionStrategy {
  /// Largest r <= target with an r-factor (max-flow), then split it into r
  /// perfect matchings. Optimal: k disjoint perfect matchings exist iff a
  /// k-factor does.
  RegularFactor,
  /// Repeatedly take any perfect matching and delete its edges; stops at the
  /// first failure.
  Greedy,
};

/// Up to `target` pairwise edge-disjoint perfect matchings; a short family is
/// a result, not an error.
MatchingFamily extract_disjoint_pms(const BipartiteGraph& g, int target,
                                    ExtractionStrategy strategy = ExtractionStrategy::RegularFactor,
                                    Seed seed = 0);

struct GaleRyserResult {
  bool feasible = false;
  std::int64_t flow_value = 0;
  std::int64_t required = 0;
  /// On infeasibility: X subset of A, Y subset of B with e(X,Y) < r(|X|+|Y|-N).
  std::optional<std::pair<std::vector<int>, std::vector<int>>> witness;
};

/// Whether G (N+N) has an r-regular spanning subgraph, decided by max-flow.
GaleRyserResult gale_ryser_feasible(const BipartiteGraph& g, int r);

/// Splits an r-regular bipartite graph into r disjoint perfect matchings.
/// Throws InvalidInput when g is not r-regular.
MatchingFamily hall_decompose(const BipartiteGraph& g, int r, Seed seed = 0);

/// Number of perfect matchings (permanent of the biadjacency matrix) by
/// Ryser's formula over a Gray-code subset walk, OpenMP-parallel across
/// subset ranges. N <= 30.
BigInt count_pms(const BipartiteGraph& g);
/// Single-threaded Ryser, kept as the reference for count_pms.
BigInt count_pms_reference(const BipartiteGraph& g);

inline constexpr int kPermanentLimit = 30;

/// log((r/N)^N N!), the Egorychev-Falikman lower bound on the number of
/// perfect matchings of any r-regular bipartite graph on N+N vertices.
double vdw_bound(int n, int r);

// Text form, one line per matching: "matching <k>: a1-b1 a2-b2 ..."
void write_family(std::ostream& out, const MatchingFamily& family);
MatchingFamily read_family(std::istream& in, int left_size, int right_size);

}  // namespace hampack
