#include <algorithm>
#include <cmath>
#include <set>

#include "hampack/error.hpp"
#include "hampack/hamilton.hpp"
#include "hampack/matching.hpp"
#include "pipeline_detail.hpp"

namespace hampack {

namespace {

// Exhaustive counting walks every path system; above this many it samples.
inline constexpr std::int64_t kExhaustiveSystems = 250'000;
inline constexpr int kSampledSystems = 64;
inline constexpr int kSpotChecks = 8;

// All perfect matchings of g as partner-of-left vectors.
std::vector<std::vector<int>> all_perfect_matchings(const BipartiteGraph& g) {
  std::vector<std::vector<int>> out;
  const int m = g.left_size();
  std::vector<int> pick(static_cast<std::size_t>(m), -1);
  std::vector<char> used(static_cast<std::size_t>(g.right_size()), 0);
  auto rec = [&](auto&& self, int a) -> void {
    if (a == m) {
      out.push_back(pick);
      return;
    }
    g.left_neighbors(a).for_each([&](int b) {
      if (used[b]) return;
      used[b] = 1;
      pick[a] = b;
      self(self, a + 1);
      used[b] = 0;
    });
  };
  rec(rec, 0);
  return out;
}

// Partition with blocks 1..ℓ filled from `rest` in order.
PartitionScheme with_blocks(const std::vector<Vertex>& v0, const std::vector<Vertex>& rest, int ell, int n) {
  const int m = static_cast<int>(rest.size()) / ell;
  std::vector<std::vector<Vertex>> blocks{v0};
  for (int j = 0; j < ell; ++j) blocks.emplace_back(rest.begin() + j * m, rest.begin() + (j + 1) * m);
  return PartitionScheme(blocks, n);
}

std::vector<std::vector<Vertex>> sorted_blocks(const PartitionScheme& v) {
  std::vector<std::vector<Vertex>> out;
  for (int j = 0; j <= v.ell(); ++j) {
    auto b = detail::block_vector(v, j);
    std::sort(b.begin(), b.end());
    out.push_back(std::move(b));
  }
  return out;
}

PartitionCount count_partition(const Digraph& d, const PartitionScheme& v, int idx, Seed seed,
                               const RunOptions& opt) {
  PartitionCount pc;
  pc.index = idx;
  const auto layers = layers_of(d, v);
  const std::vector<Vertex> v0 = detail::block_vector(v, 0);
  const Digraph exterior = arcs_of_class(d, v, EdgeClass::Exterior);
  BigInt systems = 1;
  for (std::size_t j = 0; j < layers.size(); ++j) {
    const BigInt pms = count_pms(layers[j]);
    pc.layer_log_pms.push_back(log_of(pms));
    systems *= pms;
    const auto fam = extract_disjoint_pms(layers[j], layers[j].min_degree(), ExtractionStrategy::RegularFactor,
                                          derive_seed(seed, "layer", j));
    pc.layer_regular_degree.push_back(fam.size());
    pc.log_systems_vdw += fam.size() > 0 ? vdw_bound(v.m(), fam.size()) : -INFINITY;
    if (pms == 0) {
      pc.discarded = true;
      pc.note = "layer " + std::to_string(j + 1) + " has no perfect matching";
    }
  }
  pc.log_systems = log_of(systems);
  if (pc.discarded) {
    pc.method = "discarded";
    return pc;
  }

  if (systems <= kExhaustiveSystems && v.s() + v.m() <= kCountLimit) {
    pc.method = "exhaustive";
    std::vector<std::vector<std::vector<int>>> lists;
    for (const auto& g : layers) lists.push_back(all_perfect_matchings(g));
    std::vector<std::size_t> at(lists.size(), 0);
    CounterRng rng(derive_seed(seed, "spot"));
    while (true) {
      std::vector<std::vector<int>> pick;
      for (std::size_t j = 0; j < lists.size(); ++j) pick.push_back(lists[j][at[j]]);
      const PathSystem sys = chain_matchings(v, pick);
      const BigInt c = count_hamilton_exact(contract(exterior, sys.endpoints(), v0));
      ++pc.systems_examined;
      pc.hamilton += c;
      // Spot-check that positive counts really lift to Hamilton cycles of D.
      if (c > 0 && pc.completions_checked < kSpotChecks && rng.bernoulli(0.25)) {
        ++pc.completions_checked;
        auto cyc = detail::complete_system(exterior, sys, v0, opt.budget,
                                           derive_seed(seed, "spot-ham", static_cast<std::uint64_t>(pc.systems_examined)));
        if (!cyc) throw InternalInvariantViolation("counted system has no Hamilton completion");
        if (auto why = explain_cycle_failure(d, *cyc))
          throw InternalInvariantViolation("lifted counting cycle is invalid: " + *why);
        ++pc.completions_verified;
      }
      std::size_t j = 0;
      while (j < at.size() && ++at[j] == lists[j].size()) at[j++] = 0;
      if (j == at.size()) break;
    }
    return pc;
  }

  pc.method = "sampled";
  std::set<std::vector<Vertex>> distinct;
  for (int k = 0; k < kSampledSystems; ++k) {
    std::vector<std::vector<int>> pick;
    for (std::size_t j = 0; j < layers.size(); ++j) {
      const Matching mt = max_matching(layers[j], derive_seed(seed, "sample", static_cast<std::uint64_t>(k) * 64 + j));
      std::vector<int> row(static_cast<std::size_t>(v.m()));
      for (int a = 0; a < v.m(); ++a) row[a] = mt.partner_of_left(a);
      pick.push_back(std::move(row));
    }
    const PathSystem sys = chain_matchings(v, pick);
    ++pc.systems_examined;
    ++pc.completions_checked;
    auto cyc = detail::complete_system(exterior, sys, v0, opt.budget, derive_seed(seed, "sample-ham", k));
    if (!cyc) continue;
    if (auto why = explain_cycle_failure(d, *cyc))
      throw InternalInvariantViolation("lifted counting cycle is invalid: " + *why);
    ++pc.completions_verified;
    distinct.insert(cyc->canonical().order);
  }
  pc.hamilton = static_cast<int>(distinct.size());
  return pc;
}

}  // namespace

CountCertificate count_certify(const Digraph& d, const ExperimentParams& params, Seed seed, int partitions_sample,
                               const RunOptions& opt) {
  params.validate();
  if (params.n != d.n()) throw InvalidInput("params.n does not match the digraph");
  if (partitions_sample < 1) throw InvalidParameter("partitions_sample must be at least 1");
  const int n = d.n();
  CountCertificate cert;
  cert.params = params;
  cert.seed = seed;

  // Every sampled partition shares V0, so a Hamilton cycle of D fits at most
  // one of them and the per-partition counts add up.
  const PartitionScheme first = make_partition(n, params.ell, params.s, derive_seed(seed, "partition"));
  cert.v0 = detail::block_vector(first, 0);
  std::vector<Vertex> rest;
  for (int j = 1; j <= first.ell(); ++j) {
    const auto b = first.block(j);
    rest.insert(rest.end(), b.begin(), b.end());
  }
  std::vector<PartitionScheme> parts;
  for (int i = 0; i < partitions_sample; ++i) {
    if (i > 0) {
      CounterRng rng(derive_seed(seed, "shuffle", static_cast<std::uint64_t>(i)));
      rng.shuffle(rest.begin(), rest.end());
    }
    parts.push_back(with_blocks(cert.v0, rest, params.ell, n));
  }

  std::vector<PartitionCount> results(parts.size());
  detail::parallel_for(static_cast<int>(parts.size()), detail::worker_count(opt), [&](int i) {
    results[i] = count_partition(d, parts[i], i, derive_seed(seed, "count", static_cast<std::uint64_t>(i)), opt);
  });

  std::set<std::vector<std::vector<Vertex>>> seen;
  double sum_mean = 0.0;
  int distinct = 0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    auto& pc = results[i];
    pc.blocks = sorted_blocks(parts[i]);
    if (!seen.insert(pc.blocks).second) {
      pc.duplicate = true;
      pc.note = "same partition as an earlier sample";
    } else if (!pc.discarded) {
      cert.certified += pc.hamilton;
    }
    if (!pc.duplicate) {
      sum_mean += static_cast<double>(pc.hamilton);
      ++distinct;
    }
    cert.partitions.push_back(std::move(pc));
  }
  cert.log_certified = log_of(cert.certified);
  cert.log_reference = std::lgamma(n + 1.0) + n * std::log(params.p);
  cert.log_partition_count = std::lgamma(n - params.s + 1.0) - params.ell * std::lgamma(params.m + 1.0);
  cert.log_extrapolated = distinct > 0 && sum_mean > 0 ? cert.log_partition_count + std::log(sum_mean / distinct)
                                                       : -INFINITY;
  if (n <= kCountLimit) {
    cert.exact = count_hamilton_exact(d);
    cert.log_exact = log_of(*cert.exact);
    cert.bound_holds = cert.certified <= *cert.exact;
  }
  return cert;
}

}  // namespace hampack
