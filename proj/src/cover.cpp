#include <algorithm>
#include <numeric>

#include "hampack/error.hpp"
#include "pipeline_detail.hpp"

namespace hampack {

int CoverReport::retries() const {
  int k = 0;
  for (const auto& p : parts) k += p.retries;
  return k;
}

int CoverReport::failures() const {
  int k = 0;
  for (const auto& p : parts) k += p.failures;
  return k;
}

AuditResult audit_cover(const Digraph& d, const std::vector<HamCycle>& cycles, std::vector<Arc>* uncovered) {
  AuditResult res;
  Digraph seen(d.n());
  for (std::size_t i = 0; i < cycles.size(); ++i) {
    if (auto why = explain_cycle_failure(d, cycles[i])) {
      res.ok = false;
      res.issues.push_back("cycle " + std::to_string(i) + ": " + *why);
      continue;
    }
    for (const Arc& a : cycles[i].arcs()) seen.add_arc(a.from, a.to);
  }
  std::vector<Arc> missing;
  for (const Arc& a : d.arcs())
    if (!seen.has_arc(a.from, a.to)) missing.push_back(a);
  if (!missing.empty()) {
    res.ok = false;
    res.issues.push_back(std::to_string(missing.size()) + " arcs in no cycle");
  }
  if (uncovered) *uncovered = std::move(missing);
  return res;
}

namespace {

struct CoverPart {
  SubdigraphOutcome outcome;
  std::vector<HamCycle> cycles;
};

CoverPart cover_subdigraph(const Digraph& d, const Digraph& sub, const PartitionScheme& v, int idx, Seed seed,
                           const RunOptions& opt) {
  CoverPart part;
  auto& out = part.outcome;
  out.index = idx;
  out.arcs = sub.edge_count();
  const Seed base = derive_seed(seed, "subdigraph", static_cast<std::uint64_t>(idx));
  // Leftover interior arcs are completed inside the full layer of D; the
  // extra arcs may belong to other subdigraphs, which covering permits.
  const PathSystemsResult ps =
      build_covering_systems(v, layers_of(sub, v), layers_of(d, v), derive_seed(base, "systems"));
  out.L = ps.L;
  out.r = ps.r;
  out.systems = ps.L + ps.r;
  out.notes = ps.notes;
  if (ps.completion_failed) ++out.failures;

  const std::vector<Vertex> v0 = detail::block_vector(v, 0);
  const Digraph exterior = arcs_of_class(sub, v, EdgeClass::Exterior);
  for (std::size_t k = 0; k < ps.systems.size(); ++k) {
    std::optional<HamCycle> cyc;
    for (int a = 0; a <= std::max(0, opt.retries) && !cyc; ++a) {
      if (a > 0) ++out.retries;
      cyc = detail::complete_system(exterior, ps.systems[k], v0, opt.budget,
                                    derive_seed(base, "ham", k * 16 + static_cast<std::uint64_t>(a)));
    }
    if (!cyc) {
      ++out.failures;
      continue;
    }
    if (auto why = explain_cycle_failure(d, *cyc))
      throw InternalInvariantViolation("lifted covering cycle is invalid: " + *why);
    part.cycles.push_back(std::move(*cyc));
  }
  out.cycles = static_cast<int>(part.cycles.size());
  return part;
}

struct Forest {
  PathSystem paths;
  std::vector<Vertex> isolated;
  int arcs = 0;
};

// Greedy linear forest over `arcs` (in the given order), at most n - 2 arcs
// so the auxiliary digraph keeps two vertices.
Forest linear_forest(int n, const std::vector<Arc>& arcs) {
  std::vector<int> next(static_cast<std::size_t>(n), -1), prev(static_cast<std::size_t>(n), -1);
  std::vector<int> root(static_cast<std::size_t>(n));
  std::iota(root.begin(), root.end(), 0);
  auto find = [&](int x) {
    while (root[x] != x) x = root[x] = root[root[x]];
    return x;
  };
  Forest f;
  for (const Arc& a : arcs) {
    if (f.arcs >= n - 2) break;
    if (next[a.from] >= 0 || prev[a.to] >= 0) continue;
    const int ru = find(a.from), rv = find(a.to);
    if (ru == rv) continue;
    root[ru] = rv;
    next[a.from] = a.to;
    prev[a.to] = a.from;
    ++f.arcs;
  }
  for (Vertex u = 0; u < n; ++u) {
    if (prev[u] >= 0) continue;
    if (next[u] < 0) {
      f.isolated.push_back(u);
      continue;
    }
    std::vector<Vertex> path;
    for (Vertex x = u; x >= 0; x = next[x]) path.push_back(x);
    f.paths.paths.push_back(std::move(path));
  }
  return f;
}

inline constexpr int kPatchShrinkSteps = 4;
inline constexpr int kPatchStallLimit = 6;

// Covers the arcs left after the pipeline: each round takes a linear forest
// of uncovered arcs, contracts its paths and completes them through D.
std::vector<HamCycle> patch_pass(const Digraph& d, Digraph& open, Seed seed, const RunOptions& opt, int& retries) {
  std::vector<HamCycle> out;
  int stall = 0;
  for (std::uint64_t round = 0; open.edge_count() > 0 && stall < kPatchStallLimit; ++round) {
    std::vector<Arc> arcs = open.arcs();
    CounterRng rng(derive_seed(seed, "patch-order", round));
    rng.shuffle(arcs.begin(), arcs.end());
    std::optional<HamCycle> cyc;
    for (int step = 0; step <= kPatchShrinkSteps && !cyc; ++step) {
      if (step > 0) {
        ++retries;
        arcs.resize(std::max<std::size_t>(1, arcs.size() * 3 / 4));
      }
      const Forest f = linear_forest(d.n(), arcs);
      if (f.arcs == 0) break;
      cyc = detail::complete_system(d, f.paths, f.isolated, opt.budget,
                                    derive_seed(seed, "patch-ham", round * 8 + static_cast<std::uint64_t>(step)));
      if (!cyc) {
        // Prefer the arcs the forest actually used when shrinking.
        std::vector<Arc> used;
        for (const auto& p : f.paths.paths)
          for (std::size_t i = 0; i + 1 < p.size(); ++i) used.push_back({p[i], p[i + 1]});
        rng.shuffle(used.begin(), used.end());
        arcs = std::move(used);
      }
    }
    if (!cyc) {
      ++stall;
      continue;
    }
    if (auto why = explain_cycle_failure(d, *cyc)) throw InternalInvariantViolation("patch cycle is invalid: " + *why);
    stall = 0;
    detail::remove_cycle_arcs(open, *cyc);
    out.push_back(std::move(*cyc));
  }
  return out;
}

}  // namespace

CoverReport cover(const Digraph& d, const ExperimentParams& params, Seed seed, const RunOptions& opt) {
  params.validate();
  if (params.n != d.n()) throw InvalidInput("params.n does not match the digraph");
  CoverReport rep;
  rep.params = params;
  rep.seed = seed;
  const auto parts = sample_partitions(d, params, derive_seed(seed, "partitions"), &rep.balance);
  const AssignmentResult asg = assign_edges(d, parts, AssignMode::Cover, params.alpha, derive_seed(seed, "assign"));
  rep.never_interior = asg.assignment.unplaced;

  const int t = params.t;
  std::vector<CoverPart> results(static_cast<std::size_t>(t));
  detail::parallel_for(t, detail::worker_count(opt), [&](int i) {
    results[i] = cover_subdigraph(d, asg.subdigraphs[i], parts[i], i, seed, opt);
  });

  Digraph open = d;
  for (auto& r : results) {
    rep.parts.push_back(std::move(r.outcome));
    for (auto& c : r.cycles) {
      detail::remove_cycle_arcs(open, c);
      rep.cycles.push_back(c.canonical());
    }
  }
  rep.pipeline_cycles = static_cast<int>(rep.cycles.size());

  // Last retry stage: arcs with A_e empty, and interior arcs whose stage
  // failed, are covered by forest-completion cycles.
  SubdigraphOutcome patch;
  patch.index = t;
  patch.arcs = open.edge_count();
  if (open.edge_count() > 0) {
    auto extra = patch_pass(d, open, derive_seed(seed, "patch"), opt, patch.retries);
    rep.patch_cycles = static_cast<int>(extra.size());
    for (auto& c : extra) rep.cycles.push_back(c.canonical());
    patch.cycles = rep.patch_cycles;
    patch.notes.push_back("patch pass over " + std::to_string(patch.arcs) + " uncovered arcs");
  }
  rep.parts.push_back(std::move(patch));
  rep.audit = audit_cover(d, rep.cycles, &rep.uncovered);
  return rep;
}

}  // namespace hampack
