#include <algorithm>

#include "hampack/error.hpp"
#include "hampack/matching.hpp"
#include "pipeline_detail.hpp"

namespace hampack {

namespace detail {

std::optional<HamCycle> complete_system(const Digraph& exterior, const PathSystem& system,
                                        const std::vector<Vertex>& v0, const SolverBudget& budget, Seed seed) {
  const Digraph aux = contract(exterior, system.endpoints(), v0);
  if (aux.n() < 2) return std::nullopt;
  const HamResult hr = find_hamilton(aux, budget, seed);
  if (!hr.found()) return std::nullopt;
  return lift_cycle(*hr.cycle, system, v0);
}

void remove_cycle_arcs(Digraph& g, const HamCycle& cycle) {
  for (const Arc& a : cycle.arcs()) g.remove_arc(a.from, a.to);
}

}  // namespace detail

int PackReport::retries() const {
  int k = 0;
  for (const auto& p : parts) k += p.retries;
  return k;
}

int PackReport::failures() const {
  int k = 0;
  for (const auto& p : parts) k += p.failures;
  return k;
}

AuditResult audit_disjoint(const Digraph& d, const std::vector<HamCycle>& cycles) {
  AuditResult res;
  Digraph seen(d.n());
  for (std::size_t i = 0; i < cycles.size(); ++i) {
    if (auto why = explain_cycle_failure(d, cycles[i])) {
      res.ok = false;
      res.issues.push_back("cycle " + std::to_string(i) + ": " + *why);
      continue;
    }
    for (const Arc& a : cycles[i].arcs()) {
      if (!seen.add_arc(a.from, a.to)) {
        res.ok = false;
        res.issues.push_back("cycle " + std::to_string(i) + " reuses arc " + std::to_string(a.from) + "->" +
                             std::to_string(a.to));
      }
    }
  }
  return res;
}

namespace {

struct PackPart {
  SubdigraphOutcome outcome;
  std::vector<HamCycle> cycles;
};

PackPart pack_subdigraph(const Digraph& sub, const PartitionScheme& v, int idx, int target, Seed seed,
                         const RunOptions& opt) {
  PackPart part;
  auto& out = part.outcome;
  out.index = idx;
  out.arcs = sub.edge_count();
  const Seed base = derive_seed(seed, "subdigraph", static_cast<std::uint64_t>(idx));
  const PathSystemsResult ps = build_path_systems(v, layers_of(sub, v), target, derive_seed(base, "systems"));
  out.L = ps.L;
  out.systems = ps.L;
  out.notes = ps.notes;
  const int L = ps.L;
  if (L == 0) return part;

  const int n = sub.n();
  const std::vector<Vertex> v0 = detail::block_vector(v, 0);
  Digraph pool = arcs_of_class(sub, v, EdgeClass::Exterior);
  std::vector<std::optional<HamCycle>> found(static_cast<std::size_t>(L));

  auto accept = [&](int k, HamCycle c) {
    if (auto why = explain_cycle_failure(sub, c))
      throw InternalInvariantViolation("lifted cycle of system " + std::to_string(k) + " is invalid: " + *why);
    detail::remove_cycle_arcs(pool, c);
    found[k] = std::move(c);
  };

  auto failing = [&] {
    std::vector<int> f;
    for (int k = 0; k < L; ++k)
      if (!found[k]) f.push_back(k);
    return f;
  };

  // Exterior arcs split into classes by a uniform label over the systems
  // still open; attempt 0 is the plain labelling over [L].
  auto labelled_round = [&](int attempt) {
    const std::vector<int> open = failing();
    if (open.empty()) return;
    std::vector<Digraph> cls(open.size(), Digraph(n));
    CounterRng rng(derive_seed(base, "labels", static_cast<std::uint64_t>(attempt)));
    for (Vertex u = 0; u < n; ++u)
      pool.out(u).for_each([&](int w) { cls[rng.below(open.size())].add_arc(u, w); });
    for (std::size_t c = 0; c < open.size(); ++c) {
      const int k = open[c];
      if (attempt > 0) ++out.retries;
      auto cyc = detail::complete_system(cls[c], ps.systems[k], v0, opt.budget,
                                         derive_seed(base, "ham", static_cast<std::uint64_t>(attempt * L + k)));
      if (cyc) accept(k, std::move(*cyc));
    }
  };

  const int rounds = std::max(0, opt.retries);
  for (int a = 0; a < std::max(1, rounds); ++a) labelled_round(a);
  // Final retry: systems still open take arcs one after another from the
  // shared unused pool, so each cycle sees all remaining exterior arcs.
  if (rounds > 0) {
    for (int k : failing()) {
      ++out.retries;
      auto cyc = detail::complete_system(pool, ps.systems[k], v0, opt.budget,
                                         derive_seed(base, "ham-pool", static_cast<std::uint64_t>(k)));
      if (cyc) accept(k, std::move(*cyc));
    }
  }
  for (int k = 0; k < L; ++k) {
    if (found[k]) {
      part.cycles.push_back(std::move(*found[k]));
    } else {
      ++out.failures;
    }
  }
  out.cycles = static_cast<int>(part.cycles.size());
  if (out.failures > 0)
    out.notes.push_back(std::to_string(out.failures) + " contracted digraphs without a Hamilton cycle found");
  return part;
}

}  // namespace

PackReport pack(const Digraph& d, const ExperimentParams& params, Seed seed, const RunOptions& opt) {
  params.validate();
  if (params.n != d.n()) throw InvalidInput("params.n does not match the digraph");
  PackReport rep;
  rep.params = params;
  rep.seed = seed;
  const auto parts = sample_partitions(d, params, derive_seed(seed, "partitions"), &rep.balance);
  const AssignmentResult asg = assign_edges(d, parts, AssignMode::Pack, params.alpha, derive_seed(seed, "assign"));
  // The pseudo-random variant stops at its per-layer target; plain packing
  // takes every disjoint matching the layers allow.
  const int target = params.task == Task::PackPseudo ? params.L : -1;

  const int t = params.t;
  std::vector<PackPart> results(static_cast<std::size_t>(t));
  detail::parallel_for(t, detail::worker_count(opt), [&](int i) {
    results[i] = pack_subdigraph(asg.subdigraphs[i], parts[i], i, target, seed, opt);
  });

  for (auto& r : results) {
    rep.parts.push_back(std::move(r.outcome));
    for (auto& c : r.cycles) rep.cycles.push_back(c.canonical());
  }
  rep.audit = audit_disjoint(d, rep.cycles);
  return rep;
}

}  // namespace hampack
