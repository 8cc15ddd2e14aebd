#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "hampack/bigint.hpp"
#include "hampack/contraction.hpp"
#include "hampack/digraph.hpp"
#include "hampack/rng.hpp"

namespace hampack {

struct SolverBudget {
  /// Search nodes for the exact backtracking phase.
  std::int64_t node_limit = 5'000'000;
  /// Independent heuristic restarts, each from a fresh random 1-factor.
  int restart_limit = 30;
  /// Soft wall-clock cap in seconds; 0 disables it.
  double time_hint = 0.0;
  /// Largest n for which the exact phase runs (at most 64).
  int exact_threshold = 40;
};

enum class HamStatus { Found, ProvenNonHamiltonian, BudgetExhausted };

struct HamResult {
  HamStatus status = HamStatus::BudgetExhausted;
  std::optional<HamCycle> cycle;
  std::int64_t nodes = 0;
  int restarts = 0;
  /// Why the digraph is non-Hamiltonian, or why the search stopped.
  std::string reason;

  bool found() const { return status == HamStatus::Found; }
};

/// Two-phase search. The heuristic phase takes a random 1-factor from the
/// out/in bipartite split, patches its cycles together by 2-exchanges, then
/// removes the remaining non-arcs of the tour with orientation-preserving
/// segment swaps. The exact phase is a pruned backtracking search and is the
/// only source of ProvenNonHamiltonian (besides degree and 1-factor checks).
HamResult find_hamilton(const Digraph& d, const SolverBudget& budget, Seed seed);

inline constexpr int kCountLimit = 22;

/// Number of directed Hamilton cycles, by dynamic programming over
/// (visited set, endpoint) states anchored at vertex 0, with popcount layers
/// processed in parallel. Each cycle is counted once. n <= 22.
BigInt count_hamilton_exact(const Digraph& d);
/// Single-threaded forward DP, kept as the reference for count_hamilton_exact.
BigInt count_hamilton_reference(const Digraph& d);

}  // namespace hampack
