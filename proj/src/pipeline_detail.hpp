#pragma once

#include <omp.h>

#include <exception>
#include <optional>
#include <vector>

#include "hampack/pipelines.hpp"

namespace hampack::detail {

inline int worker_count(const RunOptions& o) { return o.jobs > 0 ? o.jobs : omp_get_max_threads(); }

/// Runs body(i) for i in [0, count) on up to `jobs` threads. The first
/// exception thrown by any iteration is rethrown after the loop.
template <class Body>
void parallel_for(int count, int jobs, Body body) {
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic) num_threads(jobs) if (jobs > 1)
  for (int i = 0; i < count; ++i) {
    try {
      body(i);
    } catch (...) {
#pragma omp critical(hampack_parallel_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

inline std::vector<Vertex> block_vector(const PartitionScheme& v, int j) {
  const auto b = v.block(j);
  return {b.begin(), b.end()};
}

/// Contracts `system` against `exterior`, searches for a Hamilton cycle of
/// the auxiliary digraph and lifts it. nullopt when the search fails.
std::optional<HamCycle> complete_system(const Digraph& exterior, const PathSystem& system,
                                        const std::vector<Vertex>& v0, const SolverBudget& budget, Seed seed);

/// Removes every arc of `cycle` from `g` (arcs not in g are ignored).
void remove_cycle_arcs(Digraph& g, const HamCycle& cycle);

}  // namespace hampack::detail
