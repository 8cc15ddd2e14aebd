#include "hampack/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>

#include "hampack/error.hpp"

namespace hampack {

FlowNetwork::FlowNetwork(int nodes, int source, int sink) : nodes_(nodes), source_(source), sink_(sink) {
  if (nodes < 2) throw InvalidParameter("flow network needs at least two nodes");
  if (source < 0 || source >= nodes || sink < 0 || sink >= nodes || source == sink)
    throw InvalidParameter("flow network needs distinct in-range source and sink");
}

int FlowNetwork::add_arc(int from, int to, std::int64_t capacity) {
  if (from < 0 || from >= nodes_ || to < 0 || to >= nodes_) throw InvalidInput("flow arc endpoint out of range");
  if (capacity < 0) throw InvalidInput("negative flow capacity");
  if (to == source_) throw InvalidInput("flow arc into the source");
  if (from == sink_) throw InvalidInput("flow arc out of the sink");
  arcs_.push_back({from, to, capacity});
  return static_cast<int>(arcs_.size()) - 1;
}

namespace {

class Dinic {
 public:
  explicit Dinic(const FlowNetwork& net) : n_(net.nodes()), head_(static_cast<std::size_t>(n_), -1) {
    const auto& arcs = net.arcs();
    to_.reserve(arcs.size() * 2);
    for (const auto& a : arcs) {
      push(a.from, a.to, a.capacity);
      push(a.to, a.from, 0);
    }
  }

  std::int64_t run(int s, int t) {
    std::int64_t total = 0;
    while (bfs(s, t)) {
      iter_ = head_;
      while (true) {
        const std::int64_t f = augment(s, t);
        if (f == 0) break;
        total += f;
      }
    }
    return total;
  }

  std::int64_t residual(int e) const { return cap_[static_cast<std::size_t>(e)]; }

  std::vector<char> reachable(int s) const {
    std::vector<char> seen(static_cast<std::size_t>(n_), 0);
    std::vector<int> stack{s};
    seen[static_cast<std::size_t>(s)] = 1;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (int e = head_[static_cast<std::size_t>(u)]; e != -1; e = next_[static_cast<std::size_t>(e)]) {
        const int v = to_[static_cast<std::size_t>(e)];
        if (cap_[static_cast<std::size_t>(e)] > 0 && !seen[static_cast<std::size_t>(v)]) {
          seen[static_cast<std::size_t>(v)] = 1;
          stack.push_back(v);
        }
      }
    }
    return seen;
  }

 private:
  void push(int from, int to, std::int64_t cap) {
    to_.push_back(to);
    cap_.push_back(cap);
    next_.push_back(head_[static_cast<std::size_t>(from)]);
    head_[static_cast<std::size_t>(from)] = static_cast<int>(to_.size()) - 1;
  }

  bool bfs(int s, int t) {
    level_.assign(static_cast<std::size_t>(n_), -1);
    std::queue<int> q;
    level_[static_cast<std::size_t>(s)] = 0;
    q.push(s);
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int e = head_[static_cast<std::size_t>(u)]; e != -1; e = next_[static_cast<std::size_t>(e)]) {
        const int v = to_[static_cast<std::size_t>(e)];
        if (cap_[static_cast<std::size_t>(e)] > 0 && level_[static_cast<std::size_t>(v)] < 0) {
          level_[static_cast<std::size_t>(v)] = level_[static_cast<std::size_t>(u)] + 1;
          q.push(v);
        }
      }
    }
    return level_[static_cast<std::size_t>(t)] >= 0;
  }

  // One augmenting path in the level graph, found iteratively; dead ends
  // advance the current-arc pointer so each arc is skipped at most once per
  // phase.
  std::int64_t augment(int s, int t) {
    std::vector<int> path;  // arc indices
    int u = s;
    while (true) {
      if (u == t) {
        std::int64_t f = std::numeric_limits<std::int64_t>::max();
        for (int e : path) f = std::min(f, cap_[static_cast<std::size_t>(e)]);
        for (int e : path) {
          cap_[static_cast<std::size_t>(e)] -= f;
          cap_[static_cast<std::size_t>(e ^ 1)] += f;
        }
        return f;
      }
      int& e = iter_[static_cast<std::size_t>(u)];
      while (e != -1) {
        const int v = to_[static_cast<std::size_t>(e)];
        if (cap_[static_cast<std::size_t>(e)] > 0 &&
            level_[static_cast<std::size_t>(v)] == level_[static_cast<std::size_t>(u)] + 1)
          break;
        e = next_[static_cast<std::size_t>(e)];
      }
      if (e != -1) {
        path.push_back(e);
        u = to_[static_cast<std::size_t>(e)];
        continue;
      }
      if (path.empty()) return 0;
      level_[static_cast<std::size_t>(u)] = -1;  // dead end for this phase
      const int back = path.back();
      path.pop_back();
      u = to_[static_cast<std::size_t>(back ^ 1)];
      int& pe = iter_[static_cast<std::size_t>(u)];
      pe = next_[static_cast<std::size_t>(pe)];
    }
  }

  int n_;
  std::vector<int> head_;
  std::vector<int> next_;
  std::vector<int> to_;
  std::vector<std::int64_t> cap_;
  std::vector<int> level_;
  std::vector<int> iter_;
};

}  // namespace

FlowResult max_flow(const FlowNetwork& net) {
  Dinic dinic(net);
  FlowResult result;
  result.value = dinic.run(net.source(), net.sink());
  const auto& arcs = net.arcs();
  result.flow.resize(arcs.size());
  for (std::size_t i = 0; i < arcs.size(); ++i)
    result.flow[i] = arcs[i].capacity - dinic.residual(static_cast<int>(2 * i));
  result.source_side = dinic.reachable(net.source());
  return result;
}

std::int64_t cut_capacity(const FlowNetwork& net, const std::vector<char>& side) {
  std::int64_t c = 0;
  for (const auto& a : net.arcs())
    if (side[static_cast<std::size_t>(a.from)] && !side[static_cast<std::size_t>(a.to)]) c += a.capacity;
  return c;
}

RFactorResult complete_to_r_factor(const RFactorInstance& inst) {
  const auto& g = inst.host;
  const auto& h = inst.placed;
  const int n = g.left_size();
  const int r = inst.r;
  if (g.right_size() != n || h.left_size() != n || h.right_size() != n)
    throw InvalidInput("r-factor completion needs host and placed graphs on the same N+N parts");
  if (r < 0) throw InvalidParameter("negative target degree");
  const int delta = h.max_degree();
  if (delta > r) throw InvalidParameter("placed graph has degree above the target r");

  RFactorResult result;
  result.half_degree_hypothesis = 2 * delta <= r;
  result.added = BipartiteGraph(n, n);

  const BipartiteGraph free_edges = g.minus(h);
  const int source = 2 * n;
  const int sink = 2 * n + 1;
  FlowNetwork net(2 * n + 2, source, sink);
  for (int a = 0; a < n; ++a) {
    net.add_arc(source, a, r - h.left_degree(a));
    result.required += r - h.left_degree(a);
  }
  std::vector<std::pair<int, int>> edge_of_arc;
  const int first_edge_arc = static_cast<int>(net.arcs().size());
  for (const auto& [a, b] : free_edges.edges()) {
    net.add_arc(a, n + b, 1);
    edge_of_arc.emplace_back(a, b);
  }
  for (int b = 0; b < n; ++b) net.add_arc(n + b, sink, r - h.right_degree(b));

  const FlowResult flow = max_flow(net);
  result.flow_value = flow.value;
  for (std::size_t i = 0; i < edge_of_arc.size(); ++i)
    if (flow.flow[static_cast<std::size_t>(first_edge_arc) + i] > 0)
      result.added.add_edge(edge_of_arc[i].first, edge_of_arc[i].second);
  result.feasible = flow.value == result.required;
  return result;
}

namespace {

Bitset indicator(int size, const std::vector<int>& members) {
  Bitset b(size);
  for (int v : members) b.set(v);
  return b;
}

// Edge counts from `x` (one side) to every vertex of the other side.
std::vector<int> counts_into(const BipartiteGraph& g, const Bitset& x, bool x_on_left) {
  const int other = x_on_left ? g.right_size() : g.left_size();
  std::vector<int> counts(static_cast<std::size_t>(other));
  for (int v = 0; v < other; ++v)
    counts[static_cast<std::size_t>(v)] =
        x_on_left ? g.right_neighbors(v).count_and(x) : g.left_neighbors(v).count_and(x);
  return counts;
}

// The k vertices with the most (or fewest) edges into x.
std::vector<int> extreme(const std::vector<int>& counts, int k, bool most) {
  std::vector<int> idx(counts.size());
  std::iota(idx.begin(), idx.end(), 0);
  k = std::min<int>(k, static_cast<int>(idx.size()));
  std::partial_sort(idx.begin(), idx.begin() + k, idx.end(), [&](int a, int b) {
    return most ? counts[static_cast<std::size_t>(a)] > counts[static_cast<std::size_t>(b)]
                : counts[static_cast<std::size_t>(a)] < counts[static_cast<std::size_t>(b)];
  });
  idx.resize(static_cast<std::size_t>(k));
  std::sort(idx.begin(), idx.end());
  return idx;
}

std::vector<int> random_subset(CounterRng& rng, int universe, int k) {
  std::vector<int> all(static_cast<std::size_t>(universe));
  std::iota(all.begin(), all.end(), 0);
  for (int i = 0; i < k; ++i) {
    const auto j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(universe - i)));
    std::swap(all[static_cast<std::size_t>(i)], all[static_cast<std::size_t>(j)]);
  }
  all.resize(static_cast<std::size_t>(k));
  std::sort(all.begin(), all.end());
  return all;
}

std::int64_t sum_of(const std::vector<int>& counts, const std::vector<int>& members) {
  std::int64_t s = 0;
  for (int v : members) s += counts[static_cast<std::size_t>(v)];
  return s;
}

int quarter(int n) { return static_cast<int>(std::ceil(n * kLargeSetFraction)); }

}  // namespace

std::string ExpansionReport::summary() const {
  std::ostringstream out;
  if (violations.empty()) {
    out << "no violation in " << trials << " samples";
    if (!degree_ok) out << "; min degree " << min_degree << " below d";
    return out.str();
  }
  const auto& v = violations.front();
  out << "violation of condition " << v.condition << ": |X|=" << v.left.size() << " |Y|=" << v.right.size()
      << " e=" << v.edges << " threshold=" << v.threshold;
  if (violations.size() > 1) out << " (+" << violations.size() - 1 << " more)";
  return out.str();
}

bool revalidate(const BipartiteGraph& g, int d, const ExpansionViolation& v) {
  const int n = g.left_size();
  const auto x = static_cast<int>(v.left.size());
  const auto y = static_cast<int>(v.right.size());
  switch (v.condition) {
    case 1: {
      if (x < n * kLargeSetFraction || y < n * kLargeSetFraction) return false;
      const auto e = g.edges_between(indicator(n, v.left), indicator(g.right_size(), v.right));
      return e == v.edges && e < d * n / kLargeSetEdgeDivisor;
    }
    case 2:
    case 3: {
      const int small = v.condition == 2 ? x : y;
      const int large = v.condition == 2 ? y : x;
      if (small < 1 || small > n * kLargeSetFraction || large >= kExpansionFactor * small) return false;
      const auto e = g.edges_between(indicator(n, v.left), indicator(g.right_size(), v.right));
      return e == v.edges && e >= kDenseSetDegreeFraction * d * small;
    }
    default:
      return false;
  }
}

ExpansionReport check_expansion_hypothesis(const BipartiteGraph& g, int d, std::int64_t sample_budget, Seed seed) {
  const int n = g.left_size();
  if (g.right_size() != n) throw InvalidInput("expansion hypothesis needs balanced parts");
  ExpansionReport report;
  report.min_degree = n == 0 ? 0 : g.min_degree();

  report.degree_ok = report.min_degree >= d;
  if (n == 0) return report;

  CounterRng rng(derive_seed(seed, "expansion"));
  const int q = quarter(n);
  const int small_max = static_cast<int>(std::floor(n * kLargeSetFraction));
  const double large_threshold = d * n / kLargeSetEdgeDivisor;

  for (std::int64_t trial = 0; trial < sample_budget; ++trial) {
    report.trials = trial + 1;
    const int kind = static_cast<int>(trial % 3) + 1;
    ExpansionViolation viol;
    viol.condition = kind;
    if (kind == 1) {
      // Given a random X of the least admissible size, the sparsest Y of that
      // size is exact: the q right vertices with fewest edges from X.
      const auto x = random_subset(rng, n, q);
      const auto counts = counts_into(g, indicator(n, x), true);
      const auto y = extreme(counts, q, false);
      viol.edges = sum_of(counts, y);
      viol.threshold = large_threshold;
      if (viol.edges < large_threshold) {
        viol.left = x;
        viol.right = y;
        report.violations.push_back(std::move(viol));
        return report;
      }
    } else {
      if (small_max < 1) continue;
      const int k = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(small_max)));
      const bool left_small = kind == 2;
      std::vector<int> x;
      if (rng.bernoulli(0.5)) {
        x = random_subset(rng, n, k);
      } else {
        // Clustered sample: small sets inside one neighbourhood are the
        // likeliest to share a small common neighbourhood.
        const int pivot = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
        auto nb = (left_small ? g.right_neighbors(pivot) : g.left_neighbors(pivot)).to_vector();
        rng.shuffle(nb.begin(), nb.end());
        nb.resize(std::min<std::size_t>(nb.size(), static_cast<std::size_t>(k)));
        std::sort(nb.begin(), nb.end());
        x = nb;
        if (x.empty()) continue;
      }
      const auto xs = static_cast<int>(x.size());
      const auto counts = counts_into(g, indicator(n, x), left_small);
      const auto y = extreme(counts, kExpansionFactor * xs - 1, true);
      viol.edges = sum_of(counts, y);
      viol.threshold = kDenseSetDegreeFraction * d * xs;
      if (viol.edges >= viol.threshold) {
        viol.left = left_small ? x : y;
        viol.right = left_small ? y : x;
        report.violations.push_back(std::move(viol));
        return report;
      }
    }
  }
  return report;
}

}  // namespace hampack
