#pragma once

#include <functional>

#include "hampack/digraph.hpp"
#include "hampack/rng.hpp"

namespace hampack {

/// D(n, p): each of the n(n-1) ordered pairs is an arc independently with
/// probability p. Row u draws from its own derived stream.
Digraph sample_dnp(int n, double p, Seed seed);

/// D(F, p̄): keeps each arc e of F independently with probability probs(e).
Digraph sample_sub(const Digraph& host, const std::function<double(Arc)>& probs, Seed seed);
Digraph sample_sub(const Digraph& host, double prob, Seed seed);

/// Random bipartite graph with each of the left*right pairs present w.p. p.
BipartiteGraph sample_bipartite(int left_size, int right_size, double p, Seed seed);

/// Simple r-regular bipartite graph on N+N vertices built by overlaying r
/// random perfect matchings, each drawn from the complement of the previous
/// overlay so no edge repeats.
BipartiteGraph sample_regular_bipartite(int n, int r, Seed seed);

}  // namespace hampack
