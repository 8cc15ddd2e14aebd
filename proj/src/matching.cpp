#include "hampack/matching.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <queue>
#include <sstream>

#include "hampack/error.hpp"
#include "hampack/flow.hpp"

namespace hampack {

// GCC 11 misreads cpp_int's shift buffer as a fixed-size object.
#pragma GCC diagnostic push
#pragma GCC diagnostic ignored "-Wstringop-overflow"
#pragma GCC diagnostic ignored "-Wstringop-overread"
double log_of(const BigInt& value) {
  if (value <= 0) return -std::numeric_limits<double>::infinity();
  // Strip low bits so the conversion never overflows a double.
  const auto bits = static_cast<long>(boost::multiprecision::msb(value));
  if (bits < 1000) return std::log(value.convert_to<double>());
  const long shift = bits - 60;
  const BigInt top = value >> shift;
  return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::log(2.0);
}
#pragma GCC diagnostic pop

void Matching::add(int a, int b) {
  if (left_[a] != -1 || right_[b] != -1) throw InvalidInput("matching endpoint already used");
  left_[a] = b;
  right_[b] = a;
  ++size_;
}

std::vector<std::pair<int, int>> Matching::pairs() const {
  std::vector<std::pair<int, int>> out;
  for (int a = 0; a < left_size(); ++a)
    if (left_[a] >= 0) out.emplace_back(a, left_[a]);
  return out;
}

bool Matching::valid_in(const BipartiteGraph& host) const {
  if (left_size() != host.left_size() || right_size() != host.right_size()) return false;
  int count = 0;
  for (int a = 0; a < left_size(); ++a) {
    const int b = left_[a];
    if (b < 0) continue;
    if (b >= right_size() || right_[b] != a || !host.has_edge(a, b)) return false;
    ++count;
  }
  return count == size_;
}

BipartiteGraph MatchingFamily::union_graph() const {
  BipartiteGraph g(left_size, right_size);
  for (const auto& m : matchings)
    for (auto [a, b] : m.pairs()) g.add_edge(a, b);
  return g;
}

bool verify_family(const BipartiteGraph& host, const MatchingFamily& family, bool disjoint) {
  if (family.left_size != host.left_size() || family.right_size != host.right_size()) return false;
  BipartiteGraph seen(host.left_size(), host.right_size());
  for (const auto& m : family.matchings) {
    if (!m.is_perfect() || !m.valid_in(host)) return false;
    for (auto [a, b] : m.pairs())
      if (!seen.add_edge(a, b) && disjoint) return false;
  }
  return true;
}

Matching max_matching(const BipartiteGraph& g, std::optional<Seed> seed) {
  const int left = g.left_size();
  const int right = g.right_size();
  auto adj = g.left_lists();
  std::vector<int> left_order(static_cast<std::size_t>(left));
  std::iota(left_order.begin(), left_order.end(), 0);
  if (seed) {
    CounterRng rng(*seed);
    for (auto& row : adj) rng.shuffle(row.begin(), row.end());
    rng.shuffle(left_order.begin(), left_order.end());
  }

  Matching m(left, right);
  constexpr int kInf = std::numeric_limits<int>::max();
  std::vector<int> dist(static_cast<std::size_t>(left));
  std::vector<std::size_t> it(static_cast<std::size_t>(left));

  auto bfs = [&]() {
    std::queue<int> q;
    bool reachable_free = false;
    for (int a : left_order) {
      if (m.left_[a] == -1) {
        dist[a] = 0;
        q.push(a);
      } else {
        dist[a] = kInf;
      }
    }
    while (!q.empty()) {
      const int a = q.front();
      q.pop();
      for (int b : adj[a]) {
        const int next = m.right_[b];
        if (next == -1) {
          reachable_free = true;
        } else if (dist[next] == kInf) {
          dist[next] = dist[a] + 1;
          q.push(next);
        }
      }
    }
    return reachable_free;
  };

  // Iterative DFS along the layered graph.
  auto augment = [&](int root) {
    std::vector<int> stack{root};
    std::vector<int> via;  // right vertex used to descend from stack[k] to stack[k+1]
    while (!stack.empty()) {
      const int a = stack.back();
      bool advanced = false;
      while (it[a] < adj[a].size()) {
        const int b = adj[a][it[a]];
        const int next = m.right_[b];
        if (next == -1) {
          // Flip the alternating path root .. a, b.
          via.push_back(b);
          for (std::size_t k = 0; k < stack.size(); ++k) {
            const int u = stack[k];
            const int w = via[k];
            if (m.left_[u] == -1) ++m.size_;
            m.left_[u] = w;
            m.right_[w] = u;
          }
          return true;
        }
        if (dist[next] == dist[a] + 1) {
          ++it[a];
          via.push_back(b);
          stack.push_back(next);
          advanced = true;
          break;
        }
        ++it[a];
      }
      if (!advanced) {
        dist[a] = kInf;
        stack.pop_back();
        if (!via.empty()) via.pop_back();
      }
    }
    return false;
  };

  while (bfs()) {
    std::fill(it.begin(), it.end(), 0);
    for (int a : left_order)
      if (m.left_[a] == -1) augment(a);
  }
  return m;
}

MatchingFamily hall_decompose(const BipartiteGraph& g, int r, Seed seed) {
  if (g.left_size() != g.right_size()) throw InvalidInput("Hall decomposition needs equal parts");
  if (r < 0 || !g.is_regular(r)) throw InvalidInput("Hall decomposition needs an r-regular graph, r = " + std::to_string(r));
  MatchingFamily family{g.left_size(), g.right_size(), {}};
  BipartiteGraph rest = g;
  for (int k = 0; k < r; ++k) {
    // rest is (r-k)-regular, so Hall's condition holds and a perfect matching exists.
    Matching pm = max_matching(rest, derive_seed(seed, "hall", static_cast<std::uint64_t>(k)));
    if (!pm.is_perfect()) throw InternalInvariantViolation("regular bipartite graph without perfect matching");
    for (auto [a, b] : pm.pairs()) rest.remove_edge(a, b);
    family.matchings.push_back(std::move(pm));
  }
  return family;
}

GaleRyserResult gale_ryser_feasible(const BipartiteGraph& g, int r) {
  const int n = g.left_size();
  if (g.right_size() != n) throw InvalidInput("Gale-Ryser check needs equal parts");
  if (r < 0 || r > n) throw InvalidParameter("Gale-Ryser degree must satisfy 0 <= r <= N");
  const int source = 2 * n;
  const int sink = 2 * n + 1;
  FlowNetwork net(2 * n + 2, source, sink);
  for (int a = 0; a < n; ++a) net.add_arc(source, a, r);
  for (int b = 0; b < n; ++b) net.add_arc(n + b, sink, r);
  for (auto [a, b] : g.edges()) net.add_arc(a, n + b, 1);
  const FlowResult flow = max_flow(net);

  GaleRyserResult result;
  result.flow_value = flow.value;
  result.required = static_cast<std::int64_t>(r) * n;
  result.feasible = flow.value == result.required;
  if (!result.feasible) {
    // Min cut {s} ∪ A_s ∪ B_s: X = A_s, Y = B \ B_s give e(X,Y) < r(|X|+|Y|-N).
    std::vector<int> x;
    std::vector<int> y;
    for (int a = 0; a < n; ++a)
      if (flow.source_side[a]) x.push_back(a);
    for (int b = 0; b < n; ++b)
      if (!flow.source_side[n + b]) y.push_back(b);
    result.witness = std::make_pair(std::move(x), std::move(y));
  }
  return result;
}

MatchingFamily extract_disjoint_pms(const BipartiteGraph& g, int target, ExtractionStrategy strategy, Seed seed) {
  if (target < 0) throw InvalidParameter("matching target must be non-negative");
  MatchingFamily family{g.left_size(), g.right_size(), {}};
  if (g.left_size() != g.right_size() || target == 0) return family;
  const int n = g.left_size();
  if (n == 0) return family;

  if (strategy == ExtractionStrategy::Greedy) {
    BipartiteGraph rest = g;
    for (int k = 0; k < target; ++k) {
      Matching pm = max_matching(rest, derive_seed(seed, "greedy-pm", static_cast<std::uint64_t>(k)));
      if (!pm.is_perfect()) break;
      for (auto [a, b] : pm.pairs()) rest.remove_edge(a, b);
      family.matchings.push_back(std::move(pm));
    }
    return family;
  }

  // Largest feasible r by bisection; feasibility is monotone in r because an
  // r-factor splits into r perfect matchings and dropping one leaves an
  // (r-1)-factor.
  int lo = 0;
  int hi = std::min(target, g.min_degree());
  BipartiteGraph best(n, n);
  const BipartiteGraph empty(n, n);
  while (lo < hi) {
    const int mid = lo + (hi - lo + 1) / 2;
    RFactorResult res = complete_to_r_factor(RFactorInstance{g, empty, mid});
    if (res.feasible) {
      lo = mid;
      best = std::move(res.added);
    } else {
      hi = mid - 1;
    }
  }
  if (lo == 0) return family;
  if (!best.is_regular(lo)) {
    best = complete_to_r_factor(RFactorInstance{g, empty, lo}).added;
  }
  return hall_decompose(best, lo, derive_seed(seed, "factor-split"));
}

double vdw_bound(int n, int r) {
  if (n < 1 || r < 1 || r > n) throw InvalidParameter("vdw_bound needs 1 <= r <= N");
  return static_cast<double>(n) * std::log(static_cast<double>(r) / n) + std::lgamma(static_cast<double>(n) + 1.0);
}

void write_family(std::ostream& out, const MatchingFamily& family) {
  for (int k = 0; k < family.size(); ++k) {
    out << "matching " << k << ':';
    for (auto [a, b] : family.matchings[k].pairs()) out << ' ' << a << '-' << b;
    out << '\n';
  }
}

MatchingFamily read_family(std::istream& in, int left_size, int right_size) {
  MatchingFamily family{left_size, right_size, {}};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string word;
    int index = -1;
    char colon = 0;
    if (!(row >> word >> index >> colon) || word != "matching" || colon != ':')
      throw InvalidInput("malformed matching line: " + line);
    if (index != family.size()) throw InvalidInput("matching lines out of order at: " + line);
    Matching m(left_size, right_size);
    std::string token;
    while (row >> token) {
      const auto dash = token.find('-');
      if (dash == std::string::npos) throw InvalidInput("malformed pair '" + token + "'");
      const int a = std::stoi(token.substr(0, dash));
      const int b = std::stoi(token.substr(dash + 1));
      if (a < 0 || b < 0 || a >= left_size || b >= right_size) throw InvalidInput("pair out of range: " + token);
      m.add(a, b);
    }
    family.matchings.push_back(std::move(m));
  }
  return family;
}

}  // namespace hampack
