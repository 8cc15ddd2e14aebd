#include "hampack/pseudorandom.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "hampack/error.hpp"
#include "hampack/hamilton.hpp"
#include "hampack/sampling.hpp"
#include "pipeline_detail.hpp"

namespace hampack {

namespace {

using Bound = std::function<double(int, int)>;

const Bound kNoLower = [](int, int) { return -std::numeric_limits<double>::infinity(); };

Bitset as_set(int n, const std::vector<Vertex>& vs) {
  Bitset b(n);
  for (Vertex v : vs) b.set(v);
  return b;
}

PropertyCheck make_check(std::string name, CheckKind kind) {
  PropertyCheck c;
  c.name = std::move(name);
  c.kind = kind;
  return c;
}

bool outside(std::int64_t value, double lo, double hi) { return value < lo - 1e-9 || value > hi + 1e-9; }

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

// Degree condition lo <= d+(v), d-(v) <= hi over every vertex.
PropertyCheck check_degrees(const Digraph& g, std::string name, double lo, double hi) {
  PropertyCheck c = make_check(std::move(name), CheckKind::Degree);
  c.method = "all vertices";
  c.trials = g.n();
  for (Vertex v = 0; v < g.n() && !c.witness; ++v) {
    for (bool out : {true, false}) {
      const int deg = out ? g.out_degree(v) : g.in_degree(v);
      if (outside(deg, lo, hi)) {
        Witness w;
        w.vertex = v;
        w.out = out;
        w.value = deg;
        w.lower = lo;
        w.upper = hi;
        c.witness = w;
        break;
      }
    }
  }
  c.verdict = c.witness ? Verdict::Violation : Verdict::ExhaustivePass;
  return c;
}

// e(X) <= coef |X| for every X with 1 <= |X| <= cap.
PropertyCheck check_within(const Digraph& g, std::string name, double cap_real, double coef,
                           const PseudoBudget& budget, Seed seed) {
  PropertyCheck c = make_check(std::move(name), CheckKind::Within);
  const int n = g.n();
  const int cap = static_cast<int>(std::min<double>(n, std::floor(cap_real)));
  auto fail = [&](std::vector<Vertex> x, std::int64_t e) {
    Witness w;
    std::sort(x.begin(), x.end());
    w.x = std::move(x);
    w.value = e;
    w.lower = -std::numeric_limits<double>::infinity();
    w.upper = coef * static_cast<double>(w.x.size());
    c.witness = std::move(w);
    c.verdict = Verdict::Violation;
  };
  if (cap < 2) {
    c.method = "vacuous";
    return c;
  }
  int max_out = 0;
  for (Vertex v = 0; v < n; ++v) max_out = std::max(max_out, g.out_degree(v));
  // e(X) <= |X| min(|X| - 1, max out-degree).
  if (std::min(cap - 1, max_out) <= coef) {
    c.method = "degree bound";
    return c;
  }
  double subsets = 0.0;
  for (int i = 1; i <= cap; ++i) subsets += binomial(n, i);
  if (subsets <= static_cast<double>(budget.exhaustive_limit)) {
    c.method = "enumeration";
    std::vector<Vertex> x;
    Bitset in(n);
    auto rec = [&](auto&& self, Vertex from, std::int64_t e) -> void {
      if (c.witness) return;
      ++c.trials;
      if (!x.empty() && e > coef * static_cast<double>(x.size()) + 1e-9) {
        fail(x, e);
        return;
      }
      if (static_cast<int>(x.size()) == cap) return;
      for (Vertex v = from; v < n && !c.witness; ++v) {
        const std::int64_t add = g.out(v).count_and(in) + g.in(v).count_and(in);
        x.push_back(v);
        in.set(v);
        self(self, v + 1, e + add);
        in.reset(v);
        x.pop_back();
      }
    };
    rec(rec, 0, 0);
    return c;
  }
  c.method = "samples";
  std::vector<Vertex> all(static_cast<std::size_t>(n));
  for (Vertex v = 0; v < n; ++v) all[v] = v;
  auto draw = [&](std::int64_t i) {
    CounterRng rng(derive_seed(seed, "within", static_cast<std::uint64_t>(i)));
    const int size = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(cap - 1)));
    std::vector<Vertex> pool = all;
    for (int k = 0; k < size; ++k) std::swap(pool[k], pool[k + rng.below(static_cast<std::uint64_t>(n - k))]);
    pool.resize(static_cast<std::size_t>(size));
    return pool;
  };
  std::int64_t first = budget.samples;
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < budget.samples; ++i) {
    const auto x = draw(i);
    const std::int64_t e = g.arcs_within(as_set(n, x));
    if (e > coef * static_cast<double>(x.size()) + 1e-9) {
#pragma omp critical(hampack_within_first)
      first = std::min(first, i);
    }
  }
  c.trials = budget.samples;
  if (first < budget.samples) {
    const auto x = draw(first);
    c.trials = first + 1;
    fail(x, g.arcs_within(as_set(n, x)));
  } else {
    c.verdict = Verdict::SampledPass;
  }
  return c;
}

struct BetweenSpec {
  std::vector<Vertex> from_pool;
  std::vector<Vertex> to_pool;
  /// Both sets are drawn from from_pool and must be disjoint.
  bool shared = true;
  int min_size = 1;
  int max_size = std::numeric_limits<int>::max();
  Bound lower = kNoLower;
  Bound upper;
};

// lower(|X|, |Y|) <= e(X, Y) <= upper(|X|, |Y|) over admissible pairs.
PropertyCheck check_between(const Digraph& g, std::string name, const BetweenSpec& spec, const PseudoBudget& budget,
                            Seed seed) {
  PropertyCheck c = make_check(std::move(name), CheckKind::Between);
  const int n = g.n();
  const int a = static_cast<int>(spec.from_pool.size());
  const int b = spec.shared ? a : static_cast<int>(spec.to_pool.size());
  const int lo_size = std::max(1, spec.min_size);
  const int hi_x = std::min(spec.max_size, spec.shared ? a - lo_size : a);
  const int hi_y_cap = std::min(spec.max_size, b);
  auto fail = [&](std::vector<Vertex> x, std::vector<Vertex> y, std::int64_t e) {
    Witness w;
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    w.lower = spec.lower(static_cast<int>(x.size()), static_cast<int>(y.size()));
    w.upper = spec.upper(static_cast<int>(x.size()), static_cast<int>(y.size()));
    w.x = std::move(x);
    w.y = std::move(y);
    w.value = e;
    c.witness = std::move(w);
    c.verdict = Verdict::Violation;
  };
  if (hi_x < lo_size || hi_y_cap < lo_size) {
    c.method = "vacuous";
    return c;
  }
  const double combos = spec.shared ? std::pow(3.0, a) : std::pow(2.0, a + b);
  if (combos <= static_cast<double>(budget.exhaustive_limit)) {
    c.method = "enumeration";
    // Every vertex goes to X, Y or neither; e(X, Y) is kept incrementally.
    std::vector<Vertex> order = spec.from_pool;
    if (!spec.shared) order.insert(order.end(), spec.to_pool.begin(), spec.to_pool.end());
    std::vector<Vertex> x, y;
    Bitset bx(n), by(n);
    auto rec = [&](auto&& self, int i, std::int64_t e) -> void {
      if (c.witness) return;
      if (i == static_cast<int>(order.size())) {
        const int sx = static_cast<int>(x.size()), sy = static_cast<int>(y.size());
        if (sx < lo_size || sy < lo_size || sx > spec.max_size || sy > spec.max_size) return;
        ++c.trials;
        if (outside(e, spec.lower(sx, sy), spec.upper(sx, sy))) fail(x, y, e);
        return;
      }
      const Vertex v = order[i];
      self(self, i + 1, e);
      const bool may_x = spec.shared || i < a;
      const bool may_y = spec.shared || i >= a;
      if (may_x) {
        x.push_back(v);
        bx.set(v);
        self(self, i + 1, e + g.out(v).count_and(by));
        bx.reset(v);
        x.pop_back();
      }
      if (may_y) {
        y.push_back(v);
        by.set(v);
        self(self, i + 1, e + g.in(v).count_and(bx));
        by.reset(v);
        y.pop_back();
      }
    };
    rec(rec, 0, 0);
    return c;
  }
  c.method = "samples";
  auto draw = [&](std::int64_t i, std::vector<Vertex>& x, std::vector<Vertex>& y) {
    CounterRng rng(derive_seed(seed, "between", static_cast<std::uint64_t>(i)));
    const int sx = lo_size + static_cast<int>(rng.below(static_cast<std::uint64_t>(hi_x - lo_size + 1)));
    const int hy = std::min(hi_y_cap, spec.shared ? a - sx : b);
    const int sy = lo_size + static_cast<int>(rng.below(static_cast<std::uint64_t>(hy - lo_size + 1)));
    std::vector<Vertex> p = spec.from_pool;
    for (int k = 0; k < sx; ++k) std::swap(p[k], p[k + rng.below(static_cast<std::uint64_t>(a - k))]);
    x.assign(p.begin(), p.begin() + sx);
    if (spec.shared) {
      for (int k = sx; k < sx + sy; ++k) std::swap(p[k], p[k + rng.below(static_cast<std::uint64_t>(a - k))]);
      y.assign(p.begin() + sx, p.begin() + sx + sy);
    } else {
      std::vector<Vertex> q = spec.to_pool;
      for (int k = 0; k < sy; ++k) std::swap(q[k], q[k + rng.below(static_cast<std::uint64_t>(b - k))]);
      y.assign(q.begin(), q.begin() + sy);
    }
  };
  std::int64_t first = budget.samples;
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < budget.samples; ++i) {
    std::vector<Vertex> x, y;
    draw(i, x, y);
    const std::int64_t e = g.arcs_between(as_set(n, x), as_set(n, y));
    const int sx = static_cast<int>(x.size()), sy = static_cast<int>(y.size());
    if (outside(e, spec.lower(sx, sy), spec.upper(sx, sy))) {
#pragma omp critical(hampack_between_first)
      first = std::min(first, i);
    }
  }
  c.trials = budget.samples;
  if (first < budget.samples) {
    std::vector<Vertex> x, y;
    draw(first, x, y);
    c.trials = first + 1;
    fail(x, y, g.arcs_between(as_set(n, x), as_set(n, y)));
  } else {
    c.verdict = Verdict::SampledPass;
  }
  return c;
}

std::vector<Vertex> iota_vertices(int n) {
  std::vector<Vertex> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[i] = i;
  return v;
}

void check_arguments(double lambda, double p) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw InvalidParameter("lambda must lie in (0, 1)");
  if (!(p > 0.0 && p <= 1.0)) throw InvalidParameter("p must lie in (0, 1]");
}

// Bipartite layer as a digraph on 2m vertices, left side first.
Digraph layer_digraph(const BipartiteGraph& h) {
  Digraph g(h.left_size() + h.right_size());
  for (auto [a, b] : h.edges()) g.add_arc(a, h.left_size() + b);
  return g;
}

}  // namespace

std::string PropertyCheck::label() const {
  switch (verdict) {
    case Verdict::ExhaustivePass: return "exhaustive-pass";
    case Verdict::SampledPass: return "sampled-pass(" + std::to_string(trials) + ")";
    case Verdict::Violation: return "violation";
  }
  return "unknown";
}

bool revalidate(const Digraph& d, const PropertyCheck& check) {
  if (!check.witness) return false;
  const Witness& w = *check.witness;
  std::int64_t value = 0;
  switch (check.kind) {
    case CheckKind::Degree:
      if (w.vertex < 0 || w.vertex >= d.n()) return false;
      value = w.out ? d.out_degree(w.vertex) : d.in_degree(w.vertex);
      break;
    case CheckKind::Within: value = d.arcs_within(as_set(d.n(), w.x)); break;
    case CheckKind::Between: {
      const Bitset x = as_set(d.n(), w.x);
      const Bitset y = as_set(d.n(), w.y);
      if (x.intersects(y)) return false;
      value = d.arcs_between(x, y);
      break;
    }
  }
  return value == w.value && outside(value, w.lower, w.upper);
}

PseudoRandomReport check_pseudorandom(const Digraph& d, double lambda, double p, const PseudoBudget& budget) {
  check_arguments(lambda, p);
  const int n = d.n();
  if (n < 2) throw InvalidInput("pseudo-randomness needs at least two vertices");
  const double ln = std::log(n);
  const double np = n * p;
  PseudoRandomReport rep;
  rep.n = n;
  rep.lambda = lambda;
  rep.p = p;

  rep.p1 = check_degrees(d, "P1", (1.0 - lambda) * np, (1.0 + lambda) * np);
  rep.p1_ok = rep.p1.passed();
  double worst = -1.0;
  for (Vertex v = 0; v < n; ++v)
    for (int deg : {d.out_degree(v), d.in_degree(v)})
      if (std::abs(deg - np) > worst) {
        worst = std::abs(deg - np);
        rep.extremal = v;
        rep.extremal_degree = deg;
      }

  rep.p2 = check_within(d, "P2", 4.0 * std::pow(ln, 8) / p, (1.0 - lambda) * std::pow(ln, kExpP2.value()), budget,
                        derive_seed(budget.seed, "P2"));

  BetweenSpec p3;
  p3.from_pool = iota_vertices(n);
  p3.min_size = static_cast<int>(std::ceil(std::pow(ln, kExpP3.value()) / p));
  p3.lower = [=](int x, int y) { return (1.0 - lambda) * x * y * p; };
  p3.upper = [=](int x, int y) { return (1.0 + lambda) * x * y * p; };
  rep.p3 = check_between(d, "P3", p3, budget, derive_seed(budget.seed, "P3"));
  return rep;
}

HamiltonConditionsReport check_thm62_conditions(const Digraph& d, double lambda, double p, const PseudoBudget& budget,
                                                bool confirm) {
  check_arguments(lambda, p);
  const int n = d.n();
  if (n < 2) throw InvalidInput("Hamiltonicity conditions need at least two vertices");
  const double ln = std::log(n);
  const double np = n * p;
  HamiltonConditionsReport rep;
  rep.n = n;
  rep.lambda = lambda;
  rep.p = p;
  rep.p1 = check_degrees(d, "P1", (1.0 - lambda) * np, (1.0 + lambda) * np);
  rep.p2_star = check_within(d, "P2*", ln * ln / p, std::pow(ln, kExpP2Star.value()), budget,
                             derive_seed(budget.seed, "P2*"));
  BetweenSpec p3;
  p3.from_pool = iota_vertices(n);
  p3.min_size = static_cast<int>(std::ceil(std::pow(ln, kExpP3.value()) / p));
  p3.upper = [=](int x, int y) { return (1.0 + lambda) * x * y * p; };
  rep.p3_star = check_between(d, "P3*", p3, budget, derive_seed(budget.seed, "P3*"));
  rep.density_floor = std::pow(ln, 8) / n;
  rep.density_floor_ok = p >= rep.density_floor;
  rep.conditions_hold = lambda < 0.1 && rep.p1.passed() && rep.p2_star.passed() && rep.p3_star.passed();
  rep.predicts_hamiltonian = rep.conditions_hold && rep.density_floor_ok;
  if (confirm) rep.confirmed = find_hamilton(d, SolverBudget{}, derive_seed(budget.seed, "confirm")).found();
  return rep;
}

PackReport pack_pseudorandom(const Digraph& d, double lambda, Seed seed, const RunOptions& options,
                             const PolicyOverrides& overrides) {
  const int n = d.n();
  if (n < 2) throw InvalidInput("packing needs at least two vertices");
  const double p = static_cast<double>(d.edge_count()) / (static_cast<double>(n) * (n - 1));
  PolicyOverrides ov = overrides;
  ov.lambda = lambda;
  const ExperimentParams params = parameter_policy(n, p, Task::PackPseudo, ov);
  return pack(d, params, seed, options);
}

AppendixReport validate_appendix_lemmas(const Digraph& d, double lambda, const ExperimentParams& params, int trials,
                                        Seed seed, const PseudoBudget& budget) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw InvalidParameter("lambda must lie in (0, 1)");
  if (trials < 1) throw InvalidParameter("trials must be positive");
  params.validate();
  if (params.n != d.n()) throw InvalidInput("params.n does not match the digraph");
  const int n = d.n();
  const double ln = std::log(n);
  const double p = params.p;
  // Sub-sampling rates without the factor p.
  const bool plain = params.task == Task::PackPseudo;
  const double rate_in = plain ? params.p_in : params.p_in / p;
  const double rate_ex = plain ? params.p_ex : params.p_ex / p;
  AppendixReport rep;
  rep.lambda = lambda;
  // Each contracted digraph keeps an exterior arc with p_ex / L.
  rep.q = std::min(1.0, rate_ex / std::max(1, params.L));
  rep.p_prime = p * rep.q;
  rep.p_prime_literal = p / std::pow(ln, 6);
  const double pp = rep.p_prime;
  const int sm = params.s + params.m;
  const double lsm = std::log(static_cast<double>(sm));

  std::vector<LemmaCheck> checks = {
      {"contracted", "(A) degrees", 0, 0, ""}, {"contracted", "(B) sparse sets", 0, 0, ""}, {"contracted", "(C) set pairs", 0, 0, ""},
      {"layers", "(i) set pairs", 0, 0, ""},   {"layers", "(ii) small pairs", 0, 0, ""},    {"layers", "(iii) min degree", 0, 0, ""}};
  std::vector<std::vector<PropertyCheck>> per_trial(static_cast<std::size_t>(trials));

  detail::parallel_for(trials, omp_get_max_threads(), [&](int k) {
    const Seed ts = derive_seed(seed, "appendix", static_cast<std::uint64_t>(k));
    PseudoBudget inner = budget;
    inner.seed = ts;
    auto& out = per_trial[k];

    const Digraph c = sample_sub(d, rep.q, derive_seed(ts, "sub"));
    const PartitionScheme v = make_partition(n, params.ell, params.s, derive_seed(ts, "partition"));
    std::vector<Vertex> first(v.block(1).begin(), v.block(1).end());
    std::vector<Vertex> last(v.block(v.ell()).begin(), v.block(v.ell()).end());
    CounterRng rng(derive_seed(ts, "pairs"));
    rng.shuffle(last.begin(), last.end());
    PairList pairs;
    for (int i = 0; i < v.m(); ++i) pairs.pairs.emplace_back(first[i], last[i]);
    const auto v0 = detail::block_vector(v, 0);
    const Digraph f0 = contract(c, pairs, v0);

    out.push_back(check_degrees(f0, "(A)", (1.0 - 3.0 * lambda) * sm * pp, (1.0 + 3.0 * lambda) * sm * pp));
    out.push_back(check_within(f0, "(B)", lsm * lsm / pp, std::pow(ln, kExpP2Star.value()), inner,
                               derive_seed(ts, "B")));
    BetweenSpec cs;
    cs.from_pool = iota_vertices(f0.n());
    cs.min_size = static_cast<int>(std::ceil(std::pow(lsm, kExpP3.value()) / pp));
    cs.upper = [=](int x, int y) { return (1.0 + 2.0 * lambda) * x * y * pp; };
    out.push_back(check_between(f0, "(C)", cs, inner, derive_seed(ts, "C")));

    // Layers of the interior sub-sample.
    const Digraph f = sample_sub(d, rate_in, derive_seed(ts, "interior"));
    const auto layers = layers_of(f, v);
    const int m = v.m();
    const double ppin = p * rate_in;
    const int kk = static_cast<int>(std::ceil(24.0 * ln / (lambda * lambda * ppin)));
    const double small_coef = std::pow(ln, kExpLayer.value());
    PropertyCheck pi = make_check("(i)", CheckKind::Between);
    PropertyCheck pii = make_check("(ii)", CheckKind::Between);
    PropertyCheck piii = make_check("(iii)", CheckKind::Degree);
    for (std::size_t j = 0; j < layers.size(); ++j) {
      const Digraph g = layer_digraph(layers[j]);
      std::vector<Vertex> left = iota_vertices(m), right(static_cast<std::size_t>(m));
      for (int i = 0; i < m; ++i) right[i] = m + i;

      BetweenSpec si;
      si.from_pool = left;
      si.to_pool = right;
      si.shared = false;
      si.min_size = kk;
      si.lower = [=](int x, int y) { return (1.0 - 2.0 * lambda) * x * y * ppin; };
      si.upper = [=](int x, int y) { return (1.0 + 2.0 * lambda) * x * y * ppin; };
      PropertyCheck ci = check_between(g, "(i)", si, inner, derive_seed(ts, "i", j));

      PropertyCheck cii = make_check("(ii)", CheckKind::Between);
      // e(X, Y) <= min(|X|, |Y|) max degree.
      if (layers[j].max_degree() <= small_coef) {
        cii.method = "degree bound";
      } else {
        BetweenSpec sii = si;
        sii.min_size = 1;
        sii.max_size = kk;
        sii.lower = kNoLower;
        sii.upper = [=](int x, int y) { return std::min(x, y) * small_coef; };
        cii = check_between(g, "(ii)", sii, inner, derive_seed(ts, "ii", j));
      }

      // (iii): out-degree into V_{j+1} of each left vertex, in-degree from
      // V_j of each right vertex.
      PropertyCheck ciii = make_check("(iii)", CheckKind::Degree);
      ciii.method = "all vertices";
      const double floor_deg = (1.0 - 2.0 * lambda) * m * ppin;
      for (Vertex u = 0; u < 2 * m && !ciii.witness; ++u) {
        const bool out_side = u < m;
        const int deg = out_side ? g.out_degree(u) : g.in_degree(u);
        ++ciii.trials;
        if (deg < floor_deg - 1e-9) {
          Witness w;
          w.vertex = u;
          w.out = out_side;
          w.value = deg;
          w.lower = floor_deg;
          w.upper = std::numeric_limits<double>::infinity();
          ciii.witness = w;
          ciii.verdict = Verdict::Violation;
        }
      }
      for (auto [dst, src] : {std::pair{&pi, &ci}, std::pair{&pii, &cii}, std::pair{&piii, &ciii}}) {
        dst->method = src->method;
        dst->trials += src->trials;
        if (!src->passed() && dst->passed()) {
          dst->verdict = Verdict::Violation;
          dst->witness = src->witness;
        } else if (src->verdict == Verdict::SampledPass && dst->verdict == Verdict::ExhaustivePass) {
          dst->verdict = Verdict::SampledPass;
        }
      }
    }
    out.push_back(std::move(pi));
    out.push_back(std::move(pii));
    out.push_back(std::move(piii));
  });

  for (std::size_t q = 0; q < checks.size(); ++q) {
    checks[q].trials = trials;
    for (const auto& t : per_trial) {
      if (t[q].passed()) ++checks[q].passed;
      checks[q].method = t[q].method;
    }
  }
  rep.checks = std::move(checks);
  return rep;
}

}  // namespace hampack
