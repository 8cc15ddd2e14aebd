#include <bit>
#include <cmath>

#include "hampack/error.hpp"
#include "hampack/pipelines.hpp"

namespace hampack {

namespace {

std::vector<int> bits_of(std::uint64_t mask) {
  std::vector<int> out;
  while (mask) {
    out.push_back(std::countr_zero(mask));
    mask &= mask - 1;
  }
  return out;
}

// P(|X - E X| <= E X / 2) for X ~ Bin(t, q).
double binomial_band(int t, double q) {
  const double mean = t * q;
  double total = 0.0;
  for (int k = 0; k <= t; ++k) {
    if (std::abs(k - mean) > 0.5 * mean + 1e-12) continue;
    const double log_pmf = std::lgamma(t + 1.0) - std::lgamma(k + 1.0) - std::lgamma(t - k + 1.0) +
                           (k > 0 ? k * std::log(q) : 0.0) + (t - k > 0 ? (t - k) * std::log1p(-q) : 0.0);
    total += std::exp(log_pmf);
  }
  return total;
}

// Class masks of arc u -> v over all partitions.
void class_masks(const std::vector<PartitionScheme>& parts, Vertex u, Vertex v, std::uint64_t& a, std::uint64_t& b) {
  a = 0;
  b = 0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    switch (classify_edge(parts[i], u, v)) {
      case EdgeClass::Interior: a |= std::uint64_t{1} << i; break;
      case EdgeClass::Exterior: b |= std::uint64_t{1} << i; break;
      case EdgeClass::Absent: break;
    }
  }
}

void check_partitions(const Digraph& d, const std::vector<PartitionScheme>& parts) {
  if (parts.empty()) throw InvalidParameter("at least one partition is required");
  if (parts.size() > 64) throw SizeLimit("at most 64 partitions are supported");
  for (const auto& v : parts) {
    if (v.n() != d.n()) throw InvalidInput("partition and digraph disagree on n");
    if (v.ell() != parts.front().ell() || v.s() != parts.front().s())
      throw InvalidInput("all partitions must share (ell, s)");
  }
}

}  // namespace

std::vector<int> EdgeAssignment::A(std::size_t e) const { return bits_of(interior[e]); }
std::vector<int> EdgeAssignment::B(std::size_t e) const { return bits_of(exterior[e]); }

BalanceReport check_balance(const Digraph& d, const std::vector<PartitionScheme>& parts) {
  check_partitions(d, parts);
  const int t = static_cast<int>(parts.size());
  const auto& first = parts.front();
  const double qa = interior_probability(d.n(), first.ell(), first.s());
  const double qb = exterior_probability(d.n(), first.ell(), first.s());
  BalanceReport rep;
  rep.expected_a = t * qa;
  rep.expected_b = t * qb;
  rep.binomial_band_a = binomial_band(t, qa);
  rep.binomial_band_b = binomial_band(t, qb);
  std::int64_t in_a = 0;
  std::int64_t in_b = 0;
  std::int64_t total = 0;
  for (Vertex u = 0; u < d.n(); ++u) {
    d.out(u).for_each([&](int v) {
      std::uint64_t a, b;
      class_masks(parts, u, v, a, b);
      const int ca = std::popcount(a);
      const int cb = std::popcount(b);
      if (std::abs(ca - rep.expected_a) <= 0.5 * rep.expected_a + 1e-12) ++in_a;
      if (std::abs(cb - rep.expected_b) <= 0.5 * rep.expected_b + 1e-12) ++in_b;
      ++total;
    });
  }
  if (total > 0) {
    rep.in_band_a = static_cast<double>(in_a) / total;
    rep.in_band_b = static_cast<double>(in_b) / total;
  }
  rep.ok = total == 0 || (rep.in_band_a >= rep.binomial_band_a - rep.tolerance &&
                          rep.in_band_b >= rep.binomial_band_b - rep.tolerance);
  return rep;
}

std::vector<PartitionScheme> sample_partitions(const Digraph& d, const ExperimentParams& params, Seed seed,
                                               BalanceReport* balance, int max_resamples) {
  if (params.n != d.n()) throw InvalidInput("params.n does not match the digraph");
  BalanceReport last;
  for (int attempt = 0; attempt <= max_resamples; ++attempt) {
    std::vector<PartitionScheme> parts;
    parts.reserve(static_cast<std::size_t>(params.t));
    for (int i = 0; i < params.t; ++i)
      parts.push_back(make_partition(d.n(), params.ell, params.s, derive_seed(seed, "partition", attempt * 64 + i)));
    last = check_balance(d, parts);
    last.resamples = attempt;
    if (last.ok) {
      if (balance) *balance = last;
      return parts;
    }
  }
  if (balance) *balance = last;
  throw SetupFailure("balance check failed after " + std::to_string(max_resamples) + " resamples (in-band A " +
                     std::to_string(last.in_band_a) + " vs " + std::to_string(last.binomial_band_a) + ", B " +
                     std::to_string(last.in_band_b) + " vs " + std::to_string(last.binomial_band_b) + ")");
}

AssignmentResult assign_edges(const Digraph& d, const std::vector<PartitionScheme>& parts, AssignMode mode,
                              double alpha, Seed seed) {
  check_partitions(d, parts);
  if (mode == AssignMode::Pack && !(alpha > 1.0)) throw InvalidParameter("alpha must exceed 1");
  const int t = static_cast<int>(parts.size());
  AssignmentResult res;
  auto& as = res.assignment;
  as.t = t;
  as.mode = mode;
  as.arcs = d.arcs();
  const std::size_t count = as.arcs.size();
  as.interior.resize(count);
  as.exterior.resize(count);
  as.chosen.assign(count, -1);
  res.subdigraphs.assign(static_cast<std::size_t>(t), Digraph(d.n()));
  CounterRng rng(derive_seed(seed, "assign"));
  for (std::size_t e = 0; e < count; ++e) {
    const auto [u, v] = as.arcs[e];
    class_masks(parts, u, v, as.interior[e], as.exterior[e]);
    const auto a = bits_of(as.interior[e]);
    const auto b = bits_of(as.exterior[e]);
    int pick = -1;
    if (mode == AssignMode::Pack) {
      if (a.empty() && b.empty()) {
        pick = static_cast<int>(rng.below(static_cast<std::uint64_t>(t)));
        ++as.unplaced;
      } else if (b.empty()) {
        pick = a[rng.below(a.size())];
      } else if (a.empty()) {
        pick = b[rng.below(b.size())];
      } else {
        pick = rng.uniform() < 1.0 - 1.0 / alpha ? a[rng.below(a.size())] : b[rng.below(b.size())];
      }
      res.subdigraphs[pick].add_arc(u, v);
    } else {
      if (!a.empty()) {
        pick = a[rng.below(a.size())];
        res.subdigraphs[pick].add_arc(u, v);
      } else {
        ++as.unplaced;
      }
      for (int i : b) res.subdigraphs[i].add_arc(u, v);
    }
    as.chosen[e] = pick;
  }
  return res;
}

std::vector<BipartiteGraph> layers_of(const Digraph& d, const PartitionScheme& v) {
  std::vector<BipartiteGraph> out;
  out.reserve(static_cast<std::size_t>(v.ell() - 1));
  for (int j = 1; j < v.ell(); ++j) out.push_back(bipartite_between(d, v.block(j), v.block(j + 1)));
  return out;
}

PathSystem chain_matchings(const PartitionScheme& v, const std::vector<std::vector<int>>& partner_of_left) {
  if (static_cast<int>(partner_of_left.size()) != v.ell() - 1)
    throw InvalidInput("need one matching per layer");
  PathSystem sys;
  sys.paths.resize(static_cast<std::size_t>(v.m()));
  for (int a = 0; a < v.m(); ++a) {
    auto& path = sys.paths[a];
    int idx = a;
    path.push_back(v.block(1)[idx]);
    for (int j = 1; j < v.ell(); ++j) {
      idx = partner_of_left[j - 1].at(idx);
      if (idx < 0) throw InvalidInput("matching is not perfect");
      path.push_back(v.block(j + 1)[idx]);
    }
  }
  return sys;
}

}  // namespace hampack
