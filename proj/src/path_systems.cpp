#include <algorithm>
#include <limits>
#include <optional>

#include "hampack/error.hpp"
#include "hampack/flow.hpp"
#include "hampack/matching.hpp"
#include "hampack/pipelines.hpp"

namespace hampack {

namespace {

std::vector<int> partners(const Matching& mt) {
  std::vector<int> out(static_cast<std::size_t>(mt.left_size()));
  for (int a = 0; a < mt.left_size(); ++a) out[a] = mt.partner_of_left(a);
  return out;
}

void check_layers(const PartitionScheme& v, const std::vector<BipartiteGraph>& layers) {
  if (static_cast<int>(layers.size()) != v.ell() - 1) throw InvalidInput("expected ell - 1 layers");
  for (const auto& g : layers)
    if (g.left_size() != v.m() || g.right_size() != v.m()) throw InvalidInput("layer size differs from m");
}

// Drops edges at vertices of degree above r, chosen at random, until the
// maximum degree is at most r.
BipartiteGraph trim_to_degree(const BipartiteGraph& h, int r, Seed seed) {
  BipartiteGraph out = h;
  CounterRng rng(seed);
  auto edges = out.edges();
  rng.shuffle(edges.begin(), edges.end());
  for (auto [a, b] : edges)
    if (out.left_degree(a) > r || out.right_degree(b) > r) out.remove_edge(a, b);
  return out;
}

}  // namespace

PathSystemsResult build_path_systems(const PartitionScheme& v, const std::vector<BipartiteGraph>& layers, int target,
                                     Seed seed) {
  check_layers(v, layers);
  PathSystemsResult res;
  std::vector<MatchingFamily> fams;
  int L = std::numeric_limits<int>::max();
  for (std::size_t j = 0; j < layers.size(); ++j) {
    const int cap = layers[j].min_degree();
    const int want = target < 0 ? cap : std::min(target, cap);
    fams.push_back(extract_disjoint_pms(layers[j], want, ExtractionStrategy::RegularFactor,
                                        derive_seed(seed, "layer", j)));
    res.layer_matchings.push_back(fams.back().size());
    L = std::min(L, fams.back().size());
  }
  res.L = L;
  if (target >= 0 && L < target)
    res.notes.push_back("matching shortfall: " + std::to_string(L) + " of " + std::to_string(target));
  for (int k = 0; k < L; ++k) {
    std::vector<std::vector<int>> pick;
    for (const auto& f : fams) pick.push_back(partners(f.matchings[k]));
    res.systems.push_back(chain_matchings(v, pick));
  }
  return res;
}

PathSystemsResult build_covering_systems(const PartitionScheme& v, const std::vector<BipartiteGraph>& layers,
                                         const std::vector<BipartiteGraph>& hosts, Seed seed) {
  check_layers(v, layers);
  if (hosts.size() != layers.size()) throw InvalidInput("need one completion host per layer");
  PathSystemsResult res;
  const std::size_t nl = layers.size();
  std::vector<MatchingFamily> fams;
  int L = std::numeric_limits<int>::max();
  for (std::size_t j = 0; j < nl; ++j) {
    fams.push_back(extract_disjoint_pms(layers[j], layers[j].min_degree(), ExtractionStrategy::RegularFactor,
                                        derive_seed(seed, "layer", j)));
    res.layer_matchings.push_back(fams.back().size());
    L = std::min(L, fams.back().size());
  }
  res.L = L;

  std::vector<int> rj(nl, 0);
  std::vector<MatchingFamily> extra(nl);
  std::vector<BipartiteGraph> dropped(nl, BipartiteGraph(v.m(), v.m()));
  for (std::size_t j = 0; j < nl; ++j) {
    BipartiteGraph h = layers[j];
    for (int k = 0; k < L; ++k)
      for (auto [a, b] : fams[j].matchings[k].pairs()) h.remove_edge(a, b);
    const int delta = h.max_degree();
    // With no disjoint matchings the layer still needs one to take part.
    const int lo = std::max(delta, L == 0 ? 1 : 0);
    if (lo == 0) continue;
    std::optional<BipartiteGraph> done;
    for (int r = lo; r <= 2 * lo && !done; ++r) {
      const RFactorResult fr = complete_to_r_factor({hosts[j], h, r});
      if (fr.feasible) {
        done = fr.added.united(h);
        rj[j] = r;
      }
    }
    // The host cannot absorb the leftover: trim it to a degree the host
    // supports and leave the trimmed edges to a later stage.
    for (int r = std::min(lo, hosts[j].min_degree()); r >= 1 && !done; --r) {
      BipartiteGraph trimmed = trim_to_degree(h, r, derive_seed(seed, "trim", j * 1024 + static_cast<std::uint64_t>(r)));
      const RFactorResult fr = complete_to_r_factor({hosts[j], trimmed, r});
      if (fr.feasible) {
        res.notes.push_back("layer " + std::to_string(j + 1) + ": leftover degree " + std::to_string(delta) +
                            " trimmed to " + std::to_string(r));
        dropped[j] = h.minus(trimmed);
        done = fr.added.united(trimmed);
        rj[j] = r;
      }
    }
    if (!done) {
      res.completion_failed = true;
      res.notes.push_back("layer " + std::to_string(j + 1) + ": r-factor completion infeasible");
      continue;
    }
    extra[j] = hall_decompose(*done, rj[j], derive_seed(seed, "hall", j));
  }
  if (res.completion_failed) {
    // Only the disjoint part survives; the rest of the layers is deferred.
    res.r = 0;
    for (int k = 0; k < L; ++k) {
      std::vector<std::vector<int>> pick;
      for (std::size_t j = 0; j < nl; ++j) pick.push_back(partners(fams[j].matchings[k]));
      res.systems.push_back(chain_matchings(v, pick));
    }
    return res;
  }
  const int r = *std::max_element(rj.begin(), rj.end());
  res.r = r;
  // Layers needing fewer completion matchings repeat theirs.
  auto matching_of = [&](std::size_t j, int k) -> const Matching& {
    if (k < L) return fams[j].matchings[k];
    const int q = k - L;
    return rj[j] > 0 ? extra[j].matchings[q % rj[j]] : fams[j].matchings[q % L];
  };
  for (int k = 0; k < L + r; ++k) {
    std::vector<std::vector<int>> pick;
    for (std::size_t j = 0; j < nl; ++j) pick.push_back(partners(matching_of(j, k)));
    res.systems.push_back(chain_matchings(v, pick));
  }

  for (std::size_t j = 0; j < nl; ++j) {
    BipartiteGraph seen(v.m(), v.m());
    for (int k = 0; k < L + r; ++k)
      for (auto [a, b] : matching_of(j, k).pairs()) seen.add_edge(a, b);
    const BipartiteGraph missed = layers[j].minus(seen);
    if (missed.minus(dropped[j]).edge_count() != 0)
      throw InternalInvariantViolation("covering systems miss an untrimmed edge of layer " + std::to_string(j + 1));
    res.deferred += missed.edge_count();
  }
  if (res.deferred > 0) res.notes.push_back(std::to_string(res.deferred) + " layer edges deferred");
  return res;
}

}  // namespace hampack
