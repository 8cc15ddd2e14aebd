#include "hampack/sampling.hpp"

#include <numeric>
#include <string>

#include "hampack/error.hpp"
#include "hampack/matching.hpp"

namespace hampack {

namespace {
void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidParameter("probability " + std::to_string(p) + " outside [0,1]");
}
}  // namespace

Digraph sample_dnp(int n, double p, Seed seed) {
  if (n < 1) throw InvalidParameter("D(n,p) needs n >= 1");
  check_probability(p);
  Digraph d(n);
  for (Vertex u = 0; u < n; ++u) {
    CounterRng rng(derive_seed(seed, "dnp-row", static_cast<std::uint64_t>(u)));
    for (Vertex v = 0; v < n; ++v)
      if (v != u && rng.bernoulli(p)) d.add_arc(u, v);
  }
  return d;
}

Digraph sample_sub(const Digraph& host, const std::function<double(Arc)>& probs, Seed seed) {
  Digraph d(host.n());
  for (Vertex u = 0; u < host.n(); ++u) {
    CounterRng rng(derive_seed(seed, "sub-row", static_cast<std::uint64_t>(u)));
    host.out(u).for_each([&](int v) {
      const double p = probs(Arc{u, v});
      check_probability(p);
      if (rng.bernoulli(p)) d.add_arc(u, v);
    });
  }
  return d;
}

Digraph sample_sub(const Digraph& host, double prob, Seed seed) {
  check_probability(prob);
  return sample_sub(host, [prob](Arc) { return prob; }, seed);
}

BipartiteGraph sample_bipartite(int left_size, int right_size, double p, Seed seed) {
  check_probability(p);
  BipartiteGraph g(left_size, right_size);
  for (int a = 0; a < left_size; ++a) {
    CounterRng rng(derive_seed(seed, "bip-row", static_cast<std::uint64_t>(a)));
    for (int b = 0; b < right_size; ++b)
      if (rng.bernoulli(p)) g.add_edge(a, b);
  }
  return g;
}

BipartiteGraph sample_regular_bipartite(int n, int r, Seed seed) {
  if (n < 0 || r < 0 || r > n) throw InvalidParameter("regular bipartite needs 0 <= r <= N");
  BipartiteGraph g(n, n);
  for (int round = 0; round < r; ++round) {
    // The complement of a k-regular bipartite graph is (n-k)-regular and so
    // has a perfect matching; a shuffled search order randomises which one.
    BipartiteGraph complement(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (!g.has_edge(a, b)) complement.add_edge(a, b);
    const Matching pm = max_matching(complement, derive_seed(seed, "regular-round", static_cast<std::uint64_t>(round)));
    if (pm.size() != n) throw InternalInvariantViolation("regular complement without perfect matching");
    for (int a = 0; a < n; ++a) g.add_edge(a, pm.partner_of_left(a));
  }
  return g;
}

}  // namespace hampack
