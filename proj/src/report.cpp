#include "hampack/report.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "hampack/error.hpp"
#include "hampack/hamilton.hpp"

namespace hampack {

namespace {

// JSON has no infinities; log of zero is written as null.
Json finite(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json cycle_list(const std::vector<HamCycle>& cycles) {
  Json out = Json::array();
  for (const auto& c : cycles) out.push_back(c.order);
  return out;
}

Json graph_json(const Digraph& d, const GraphSource& source) {
  Json g;
  g["n"] = d.n();
  g["source"] = {{"kind", source.kind}};
  if (source.kind == "dnp") {
    g["source"]["p"] = source.p;
    g["source"]["seed"] = source.seed;
  } else {
    g["source"]["path"] = source.path;
  }
  Json arcs = Json::array();
  for (const Arc& a : d.arcs()) arcs.push_back({a.from, a.to});
  g["arcs"] = std::move(arcs);
  return g;
}

Json header(const char* task, const Digraph& d, const GraphSource& source, Seed seed) {
  return {{"format", "hampack-certificate"}, {"version", 1}, {"task", task}, {"seed", seed},
          {"graph", graph_json(d, source)}};
}

}  // namespace

Json to_json(const ExperimentParams& e) {
  Json slack = Json::array();
  for (const auto& s : e.slack)
    slack.push_back({{"name", s.name}, {"lhs", finite(s.lhs)},
                     {"rhs", finite(s.rhs)}, {"holds", s.holds()}});
  return {{"task", std::string(task_name(e.task))},
          {"n", e.n},
          {"p", e.p},
          {"alpha", e.alpha},
          {"ell", e.ell},
          {"s", e.s},
          {"m", e.m},
          {"t", e.t},
          {"p_in", e.p_in},
          {"p_ex", e.p_ex},
          {"lambda", e.lambda},
          {"p_prime", e.p_prime},
          {"L", e.L},
          {"r", e.r},
          {"predicted", e.predicted},
          {"partitions", e.partitions},
          {"slack", slack}};
}

Json to_json(const BalanceReport& b) {
  return {{"expected_a", b.expected_a},           {"expected_b", b.expected_b},
          {"in_band_a", b.in_band_a},             {"in_band_b", b.in_band_b},
          {"binomial_band_a", b.binomial_band_a}, {"binomial_band_b", b.binomial_band_b},
          {"tolerance", b.tolerance},             {"resamples", b.resamples},
          {"ok", b.ok}};
}

Json to_json(const SubdigraphOutcome& o) {
  return {{"index", o.index},   {"arcs", o.arcs},         {"L", o.L},
          {"r", o.r},           {"systems", o.systems},   {"cycles", o.cycles},
          {"retries", o.retries}, {"failures", o.failures}, {"notes", o.notes}};
}

Json to_json(const AuditResult& a) { return {{"ok", a.ok}, {"issues", a.issues}}; }

Json to_json(const PackReport& r, bool with_cycles) {
  Json parts = Json::array();
  for (const auto& p : r.parts) parts.push_back(to_json(p));
  Json out = {{"params", to_json(r.params)}, {"seed", r.seed},          {"balance", to_json(r.balance)},
              {"achieved", r.achieved()},    {"retries", r.retries()},  {"failures", r.failures()},
              {"subdigraphs", parts},        {"audit", to_json(r.audit)}};
  if (with_cycles) out["cycles"] = cycle_list(r.cycles);
  return out;
}

Json to_json(const CoverReport& r, bool with_cycles) {
  Json parts = Json::array();
  for (const auto& p : r.parts) parts.push_back(to_json(p));
  Json uncovered = Json::array();
  for (const Arc& a : r.uncovered) uncovered.push_back({a.from, a.to});
  Json out = {{"params", to_json(r.params)},
              {"seed", r.seed},
              {"balance", to_json(r.balance)},
              {"achieved", r.cycles.size()},
              {"pipeline_cycles", r.pipeline_cycles},
              {"patch_cycles", r.patch_cycles},
              {"never_interior", r.never_interior},
              {"retries", r.retries()},
              {"failures", r.failures()},
              {"subdigraphs", parts},
              {"uncovered", uncovered},
              {"audit", to_json(r.audit)}};
  if (with_cycles) out["cycles"] = cycle_list(r.cycles);
  return out;
}

Json to_json(const CountCertificate& c) {
  Json parts = Json::array();
  for (const auto& p : c.partitions) {
    Json layers = Json::array();
    for (double x : p.layer_log_pms) layers.push_back(finite(x));
    parts.push_back({{"index", p.index},
                     {"duplicate", p.duplicate},
                     {"discarded", p.discarded},
                     {"layer_log_pms", layers},
                     {"layer_regular_degree", p.layer_regular_degree},
                     {"log_systems", finite(p.log_systems)},
                     {"log_systems_vdw", finite(p.log_systems_vdw)},
                     {"method", p.method},
                     {"hamilton", p.hamilton.str()},
                     {"systems_examined", p.systems_examined},
                     {"completions_checked", p.completions_checked},
                     {"completions_verified", p.completions_verified},
                     {"note", p.note}});
  }
  Json out = {{"params", to_json(c.params)},
              {"seed", c.seed},
              {"v0", c.v0},
              {"partitions", parts},
              {"certified", c.certified.str()},
              {"log_certified", finite(c.log_certified)},
              {"log_reference", finite(c.log_reference)},
              {"log_partition_count", finite(c.log_partition_count)},
              {"log_extrapolated", finite(c.log_extrapolated)},
              {"bound_holds", c.bound_holds}};
  if (c.exact) {
    out["exact"] = c.exact->str();
    out["log_exact"] = finite(c.log_exact);
    out["gap_per_vertex"] = finite((c.log_exact - c.log_reference) / c.params.n);
  }
  return out;
}

Json to_json(const PropertyCheck& c) {
  Json out = {{"name", c.name}, {"verdict", c.label()}, {"method", c.method}, {"trials", c.trials}};
  if (c.witness) {
    const Witness& w = *c.witness;
    Json wj = {{"value", w.value}, {"lower", finite(w.lower)}, {"upper", finite(w.upper)}};
    if (c.kind == CheckKind::Degree) {
      wj["vertex"] = w.vertex;
      wj["direction"] = w.out ? "out" : "in";
    } else {
      wj["x"] = w.x;
      if (c.kind == CheckKind::Between) wj["y"] = w.y;
    }
    out["witness"] = std::move(wj);
  }
  return out;
}

Json to_json(const PseudoRandomReport& r) {
  return {{"n", r.n},
          {"lambda", r.lambda},
          {"p", r.p},
          {"p1_ok", r.p1_ok},
          {"extremal", {{"vertex", r.extremal}, {"degree", r.extremal_degree}}},
          {"P1", to_json(r.p1)},
          {"P2", to_json(r.p2)},
          {"P3", to_json(r.p3)},
          {"passes", r.passes()}};
}

Json to_json(const HamiltonConditionsReport& r) {
  Json out = {{"n", r.n},
              {"lambda", r.lambda},
              {"p", r.p},
              {"P1", to_json(r.p1)},
              {"P2*", to_json(r.p2_star)},
              {"P3*", to_json(r.p3_star)},
              {"density_floor", r.density_floor},
              {"density_floor_ok", r.density_floor_ok},
              {"conditions_hold", r.conditions_hold},
              {"predicts_hamiltonian", r.predicts_hamiltonian}};
  if (r.confirmed) out["hamiltonian_found"] = *r.confirmed;
  return out;
}

Json to_json(const AppendixReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"lemma", c.lemma},
                      {"property", c.property},
                      {"passed", c.passed},
                      {"trials", c.trials},
                      {"method", c.method}});
  return {{"lambda", r.lambda},
          {"q", r.q},
          {"p_prime", r.p_prime},
          {"p_prime_literal", r.p_prime_literal},
          {"checks", checks}};
}

Json make_certificate(const Digraph& d, const GraphSource& source, const PackReport& report) {
  Json out = header(report.params.task == Task::PackPseudo ? "pack-pseudo" : "pack", d, source, report.seed);
  out["audit"] = "disjoint";
  out["cycles"] = cycle_list(report.cycles);
  return out;
}

Json make_certificate(const Digraph& d, const GraphSource& source, const CoverReport& report) {
  Json out = header("cover", d, source, report.seed);
  out["audit"] = "cover";
  out["cycles"] = cycle_list(report.cycles);
  return out;
}

Json make_certificate(const Digraph& d, const GraphSource& source, const CountCertificate& cert) {
  Json out = header("count", d, source, cert.seed);
  out["audit"] = "count";
  Json parts = Json::array();
  for (const auto& p : cert.partitions)
    parts.push_back({{"blocks", p.blocks},
                     {"method", p.method},
                     {"duplicate", p.duplicate},
                     {"hamilton", p.hamilton.str()}});
  out["partitions"] = parts;
  out["certified"] = cert.certified.str();
  return out;
}

namespace {

using ArcSet = std::set<std::pair<int, int>>;

// Plain re-implementation of the cycle check over an explicit arc set.
std::optional<std::string> cycle_problem(int n, const ArcSet& arcs, const std::vector<int>& order) {
  if (static_cast<int>(order.size()) != n) return "has " + std::to_string(order.size()) + " vertices, expected " +
                                                   std::to_string(n);
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (int v : order) {
    if (v < 0 || v >= n) return "vertex " + std::to_string(v) + " out of range";
    if (seen[v]) return "repeats vertex " + std::to_string(v);
    seen[v] = 1;
  }
  for (int i = 0; i < n; ++i) {
    const int u = order[i], w = order[(i + 1) % n];
    if (!arcs.count({u, w})) return "uses missing arc " + std::to_string(u) + "->" + std::to_string(w);
  }
  return std::nullopt;
}

void verify_count(const Json& cert, int n, const ArcSet& arcs, VerifyResult& res) {
  const auto& parts = cert.at("partitions");
  BigInt sum = 0;
  std::set<std::vector<std::vector<int>>> distinct;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const auto& part = parts[i];
    const auto blocks = part.at("blocks").get<std::vector<std::vector<int>>>();
    const BigInt claimed(part.at("hamilton").get<std::string>());
    const std::string method = part.at("method").get<std::string>();
    auto flag = [&](const std::string& why) {
      res.ok = false;
      if (!res.bad_index) res.bad_index = static_cast<int>(i);
      res.issues.push_back("partition " + std::to_string(i) + ": " + why);
    };
    if (!distinct.insert(blocks).second) {
      if (!part.at("duplicate").get<bool>()) flag("repeats an earlier partition but is not marked duplicate");
      continue;
    }
    sum += claimed;
    if (n > kCountLimit) continue;
    // Template subgraph: V_j -> V_j+1 inside, and V0 ∪ V_ℓ -> V0 ∪ V_1 outside.
    std::vector<int> block(static_cast<std::size_t>(n), -1);
    for (std::size_t j = 0; j < blocks.size(); ++j)
      for (int v : blocks[j]) block.at(v) = static_cast<int>(j);
    if (std::count(block.begin(), block.end(), -1) != 0) {
      flag("blocks do not cover the vertex set");
      continue;
    }
    const int ell = static_cast<int>(blocks.size()) - 1;
    Digraph sub(n);
    for (auto [u, w] : arcs) {
      const int bu = block[u], bw = block[w];
      const bool interior = bu >= 1 && bu < ell && bw == bu + 1;
      const bool exterior = (bu == 0 || bu == ell) && (bw == 0 || bw == 1);
      if (interior || exterior) sub.add_arc(u, w);
    }
    const BigInt truth = count_hamilton_exact(sub);
    if (method == "exhaustive" && claimed != truth)
      flag("claims " + claimed.str() + " cycles, recount gives " + truth.str());
    else if (claimed > truth)
      flag("claims " + claimed.str() + " cycles, more than the recount " + truth.str());
  }
  if (sum != BigInt(cert.at("certified").get<std::string>())) {
    res.ok = false;
    res.issues.push_back("certified total does not equal the sum over distinct partitions");
  }
}

}  // namespace

VerifyResult verify_certificate(const Json& cert) {
  VerifyResult res;
  try {
    if (cert.value("format", "") != "hampack-certificate") throw InvalidInput("not a certificate");
    const auto& g = cert.at("graph");
    const int n = g.at("n").get<int>();
    ArcSet arcs;
    for (const auto& a : g.at("arcs")) arcs.insert({a.at(0).get<int>(), a.at(1).get<int>()});
    const std::string audit = cert.at("audit").get<std::string>();
    if (audit == "count") {
      verify_count(cert, n, arcs, res);
      return res;
    }
    ArcSet used;
    bool reused = false;
    const auto& cycles = cert.at("cycles");
    for (std::size_t i = 0; i < cycles.size(); ++i) {
      const auto order = cycles[i].get<std::vector<int>>();
      if (auto why = cycle_problem(n, arcs, order)) {
        res.ok = false;
        if (!res.bad_index) res.bad_index = static_cast<int>(i);
        res.issues.push_back("cycle " + std::to_string(i) + " " + *why);
        continue;
      }
      for (int k = 0; k < n; ++k) {
        const std::pair<int, int> a{order[k], order[(k + 1) % n]};
        if (!used.insert(a).second && audit == "disjoint" && !reused) {
          reused = true;
          res.ok = false;
          if (!res.bad_index) res.bad_index = static_cast<int>(i);
          res.issues.push_back("cycle " + std::to_string(i) + " reuses arc " + std::to_string(a.first) + "->" +
                               std::to_string(a.second));
        }
      }
    }
    if (audit == "cover") {
      std::int64_t missing = 0;
      for (const auto& a : arcs) missing += used.count(a) == 0;
      if (missing > 0) {
        res.ok = false;
        res.issues.push_back(std::to_string(missing) + " arcs in no cycle");
      }
    }
  } catch (const Json::exception& e) {
    res.ok = false;
    res.issues.push_back(std::string("malformed certificate: ") + e.what());
  } catch (const Error& e) {
    res.ok = false;
    res.issues.push_back(e.what());
  }
  return res;
}

}  // namespace hampack
