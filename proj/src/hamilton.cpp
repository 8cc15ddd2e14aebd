#include "hampack/hamilton.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <numeric>

#include "hampack/error.hpp"
#include "hampack/matching.hpp"

namespace hampack {

namespace {

using Clock = std::chrono::steady_clock;

class Deadline {
 public:
  explicit Deadline(double seconds)
      : active_(seconds > 0),
        end_(Clock::now() + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(seconds))) {}
  bool passed() const { return active_ && Clock::now() >= end_; }

 private:
  bool active_;
  Clock::time_point end_;
};

// Successor array of a spanning 1-factor, or empty if none exists.
std::vector<Vertex> random_cycle_cover(const Digraph& d, Seed seed) {
  const int n = d.n();
  BipartiteGraph split(n, n);
  for (Vertex u = 0; u < n; ++u) d.out(u).for_each([&](int v) { split.add_edge(u, v); });
  const Matching m = max_matching(split, seed);
  if (!m.is_perfect()) return {};
  std::vector<Vertex> succ(static_cast<std::size_t>(n));
  for (Vertex u = 0; u < n; ++u) succ[static_cast<std::size_t>(u)] = m.partner_of_left(u);
  return succ;
}

std::vector<std::vector<Vertex>> cycles_of(const std::vector<Vertex>& succ) {
  const auto n = succ.size();
  std::vector<char> seen(n, 0);
  std::vector<std::vector<Vertex>> cycles;
  for (std::size_t start = 0; start < n; ++start) {
    if (seen[start]) continue;
    std::vector<Vertex> cyc;
    for (auto v = static_cast<Vertex>(start); !seen[static_cast<std::size_t>(v)]; v = succ[static_cast<std::size_t>(v)]) {
      seen[static_cast<std::size_t>(v)] = 1;
      cyc.push_back(v);
    }
    cycles.push_back(std::move(cyc));
  }
  return cycles;
}

// Merges pairs of cycles through a 2-exchange: with a -> a' in one cycle and
// b -> b' in another, arcs a -> b' and b -> a' join them into one cycle.
void patch_cycles(const Digraph& d, std::vector<Vertex>& succ, CounterRng& rng) {
  const int n = d.n();
  std::vector<Vertex> pred(static_cast<std::size_t>(n));
  std::vector<int> cycle_id(static_cast<std::size_t>(n));
  while (true) {
    auto cycles = cycles_of(succ);
    if (cycles.size() <= 1) return;
    for (int u = 0; u < n; ++u) pred[static_cast<std::size_t>(succ[static_cast<std::size_t>(u)])] = u;
    for (std::size_t c = 0; c < cycles.size(); ++c)
      for (Vertex v : cycles[c]) cycle_id[static_cast<std::size_t>(v)] = static_cast<int>(c);
    std::vector<std::size_t> by_size(cycles.size());
    std::iota(by_size.begin(), by_size.end(), 0);
    rng.shuffle(by_size.begin(), by_size.end());
    std::stable_sort(by_size.begin(), by_size.end(),
                     [&](std::size_t x, std::size_t y) { return cycles[x].size() < cycles[y].size(); });
    bool merged = false;
    for (std::size_t c : by_size) {
      for (Vertex a : cycles[c]) {
        const Vertex a2 = succ[static_cast<std::size_t>(a)];
        const int found = [&] {
          int hit = -1;
          d.out(a).for_each([&](int b2) {
            if (hit >= 0 || cycle_id[static_cast<std::size_t>(b2)] == static_cast<int>(c)) return;
            if (d.has_arc(pred[static_cast<std::size_t>(b2)], a2)) hit = b2;
          });
          return hit;
        }();
        if (found >= 0) {
          const Vertex b = pred[static_cast<std::size_t>(found)];
          succ[static_cast<std::size_t>(a)] = found;
          succ[static_cast<std::size_t>(b)] = a2;
          merged = true;
          break;
        }
      }
      if (merged) break;
    }
    if (!merged) return;
  }
}

// Concatenates the cycles into one cyclic order, choosing each entry point so
// the joining arc exists when possible.
std::vector<Vertex> join_cycles(const Digraph& d, std::vector<std::vector<Vertex>> cycles) {
  std::sort(cycles.begin(), cycles.end(), [](const auto& x, const auto& y) { return x.size() > y.size(); });
  std::vector<Vertex> tour = cycles.front();
  for (std::size_t c = 1; c < cycles.size(); ++c) {
    const auto& cyc = cycles[c];
    const Vertex last = tour.back();
    std::size_t entry = 0;
    for (std::size_t i = 0; i < cyc.size(); ++i)
      if (d.has_arc(last, cyc[i])) {
        entry = i;
        break;
      }
    for (std::size_t k = 0; k < cyc.size(); ++k) tour.push_back(cyc[(entry + k) % cyc.size()]);
  }
  return tour;
}

// Local search over cyclic orders minimising the number of non-arcs. A move
// removes (a,a'), (b,b'), (c,c') and reorders the tour as
// a' .. b | b' .. c | c' .. a  ->  b' .. c | a' .. b | c' .. a.
class TourSearch {
 public:
  TourSearch(const Digraph& d, std::vector<Vertex> tour, CounterRng& rng)
      : d_(d), n_(d.n()), order_(std::move(tour)), pos_(static_cast<std::size_t>(n_)), rng_(rng) {
    reindex();
  }

  int bad_count() const {
    int bad = 0;
    for (int i = 0; i < n_; ++i) bad += is_bad(at(i), at(i + 1));
    return bad;
  }

  bool run(std::int64_t max_moves, const Deadline& deadline) {
    int bad = bad_count();
    int stale = 0;
    for (std::int64_t move = 0; move < max_moves && bad > 0; ++move) {
      if ((move & 63) == 0 && deadline.passed()) return false;
      std::vector<int> bad_pos;
      for (int i = 0; i < n_; ++i)
        if (is_bad(at(i), at(i + 1))) bad_pos.push_back(i);
      rng_.shuffle(bad_pos.begin(), bad_pos.end());

      bool improved = false;
      std::vector<Candidate> plateau;
      for (int i : bad_pos) {
        const auto cands = candidates(at(i), at(i + 1));
        for (const auto& cand : cands) {
          if (cand.delta < 0) {
            apply(cand);
            bad += cand.delta;
            improved = true;
            break;
          }
          plateau.push_back(cand);
        }
        if (improved) break;
      }
      if (improved) {
        stale = 0;
        continue;
      }
      ++stale;
      if (!plateau.empty() && stale < 4 * n_) {
        apply(plateau[rng_.below(plateau.size())]);
      } else {
        kick();
        bad = bad_count();
        stale = 0;
      }
    }
    return bad == 0;
  }

  const std::vector<Vertex>& order() const { return order_; }

 private:
  struct Candidate {
    Vertex a_next;  // a'
    int rb;         // offset of b' from a'
    int rc;         // offset of c from a'
    int delta;
  };

  Vertex at(int i) const { return order_[static_cast<std::size_t>(((i % n_) + n_) % n_)]; }
  int rel(Vertex v, Vertex origin) const {
    return (pos_[static_cast<std::size_t>(v)] - pos_[static_cast<std::size_t>(origin)] + n_) % n_;
  }
  int is_bad(Vertex u, Vertex v) const { return d_.has_arc(u, v) ? 0 : 1; }

  void reindex() {
    for (int i = 0; i < n_; ++i) pos_[static_cast<std::size_t>(order_[static_cast<std::size_t>(i)])] = i;
  }

  std::vector<Candidate> candidates(Vertex a, Vertex a2) const {
    std::vector<Candidate> out;
    const int base = pos_[static_cast<std::size_t>(a2)];
    d_.out(a).for_each([&](int b2) {
      const int rb = rel(b2, a2);
      if (rb < 1 || rb > n_ - 2) return;
      const Vertex b = at(base + rb - 1);
      d_.in(a2).for_each([&](int c) {
        const int rc = rel(c, a2);
        if (rc < rb || rc > n_ - 2) return;
        const Vertex c2 = at(base + rc + 1);
        const int delta = is_bad(b, c2) - 1 - is_bad(b, b2) - is_bad(c, c2);
        if (delta <= 0) out.push_back({a2, rb, rc, delta});
      });
    });
    return out;
  }

  void apply(const Candidate& cand) {
    const int base = pos_[static_cast<std::size_t>(cand.a_next)];
    std::vector<Vertex> next;
    next.reserve(static_cast<std::size_t>(n_));
    for (int k = cand.rb; k <= cand.rc; ++k) next.push_back(at(base + k));
    for (int k = 0; k < cand.rb; ++k) next.push_back(at(base + k));
    for (int k = cand.rc + 1; k < n_; ++k) next.push_back(at(base + k));
    order_ = std::move(next);
    reindex();
  }

  void kick() {
    if (n_ < 4) return;
    const Vertex a2 = at(static_cast<int>(rng_.below(static_cast<std::uint64_t>(n_))));
    const int rb = 1 + static_cast<int>(rng_.below(static_cast<std::uint64_t>(n_ - 2)));
    const int rc = rb + static_cast<int>(rng_.below(static_cast<std::uint64_t>(n_ - 1 - rb)));
    apply({a2, rb, rc, 0});
  }

  const Digraph& d_;
  int n_;
  std::vector<Vertex> order_;
  std::vector<int> pos_;
  CounterRng& rng_;
};

// Pruned backtracking on 64-bit masks.
class ExactSearch {
 public:
  ExactSearch(const Digraph& d, std::int64_t node_limit, const Deadline& deadline)
      : n_(d.n()), out_(static_cast<std::size_t>(n_)), in_(static_cast<std::size_t>(n_)), limit_(node_limit),
        deadline_(deadline) {
    for (Vertex u = 0; u < n_; ++u) {
      d.out(u).for_each([&](int v) { out_[static_cast<std::size_t>(u)] |= bit(v); });
      d.in(u).for_each([&](int v) { in_[static_cast<std::size_t>(u)] |= bit(v); });
    }
  }

  /// True when a cycle was found; aborted() tells a budget stop from a proof.
  bool run() {
    start_ = 0;
    for (Vertex v = 1; v < n_; ++v)
      if (std::popcount(out_[static_cast<std::size_t>(v)]) < std::popcount(out_[static_cast<std::size_t>(start_)]))
        start_ = v;
    path_ = {start_};
    const std::uint64_t all = n_ == 64 ? ~0ULL : (bit(n_) - 1);
    return dfs(start_, all & ~bit(start_));
  }

  bool aborted() const { return aborted_; }
  std::int64_t nodes() const { return nodes_; }
  const std::vector<Vertex>& path() const { return path_; }

 private:
  static std::uint64_t bit(int v) { return std::uint64_t{1} << v; }

  bool dfs(Vertex cur, std::uint64_t unvisited) {
    if (++nodes_ > limit_ || ((nodes_ & 4095) == 0 && deadline_.passed())) {
      aborted_ = true;
      return false;
    }
    if (unvisited == 0) return (out_[static_cast<std::size_t>(cur)] >> start_) & 1U;

    std::uint64_t forced = 0;
    int closing = 0;
    for (std::uint64_t rest = unvisited; rest; rest &= rest - 1) {
      const int w = std::countr_zero(rest);
      const std::uint64_t in_opt = in_[static_cast<std::size_t>(w)] & (unvisited | bit(cur));
      const std::uint64_t out_opt = out_[static_cast<std::size_t>(w)] & (unvisited | bit(start_));
      if (!in_opt || !out_opt) return false;
      if (in_opt == bit(cur)) forced |= bit(w);
      if (out_opt == bit(start_)) ++closing;
    }
    if (std::popcount(forced) > 1 || closing > 1) return false;

    const std::uint64_t options = forced ? forced : out_[static_cast<std::size_t>(cur)] & unvisited;
    std::vector<std::pair<int, Vertex>> order;
    for (std::uint64_t rest = options; rest; rest &= rest - 1) {
      const int w = std::countr_zero(rest);
      order.emplace_back(std::popcount(out_[static_cast<std::size_t>(w)] & unvisited), w);
    }
    std::sort(order.begin(), order.end());
    for (const auto& [deg, w] : order) {
      path_.push_back(w);
      if (dfs(w, unvisited & ~bit(w))) return true;
      path_.pop_back();
      if (aborted_) return false;
    }
    return false;
  }

  int n_;
  std::vector<std::uint64_t> out_;
  std::vector<std::uint64_t> in_;
  std::int64_t limit_;
  const Deadline& deadline_;
  std::int64_t nodes_ = 0;
  bool aborted_ = false;
  Vertex start_ = 0;
  std::vector<Vertex> path_;
};

bool strongly_connected(const Digraph& d) {
  const int n = d.n();
  for (int dir = 0; dir < 2; ++dir) {
    Bitset seen(n);
    std::vector<Vertex> stack{0};
    seen.set(0);
    while (!stack.empty()) {
      const Vertex u = stack.back();
      stack.pop_back();
      Bitset next = dir == 0 ? d.out(u) : d.in(u);
      next.subtract(seen);
      next.for_each([&](int v) {
        seen.set(v);
        stack.push_back(v);
      });
    }
    if (seen.count() != n) return false;
  }
  return true;
}

}  // namespace

HamResult find_hamilton(const Digraph& d, const SolverBudget& budget, Seed seed) {
  const int n = d.n();
  if (n < 2) throw InvalidParameter("Hamilton cycle search needs n >= 2");
  if (budget.node_limit < 0 || budget.restart_limit < 0 || budget.time_hint < 0 || budget.exact_threshold < 0)
    throw InvalidParameter("solver budget entries must be nonnegative");
  if (budget.exact_threshold > 64) throw InvalidParameter("exact_threshold is limited to 64");

  HamResult result;
  auto proven = [&](std::string why) {
    result.status = HamStatus::ProvenNonHamiltonian;
    result.reason = std::move(why);
    return result;
  };
  for (Vertex v = 0; v < n; ++v) {
    if (d.out_degree(v) == 0) return proven("vertex " + std::to_string(v) + " has out-degree 0");
    if (d.in_degree(v) == 0) return proven("vertex " + std::to_string(v) + " has in-degree 0");
  }
  if (!strongly_connected(d)) return proven("not strongly connected");

  const Deadline deadline(budget.time_hint);
  const std::int64_t max_moves = 200 + 40 * static_cast<std::int64_t>(n);
  for (int restart = 0; restart < budget.restart_limit; ++restart) {
    if (deadline.passed()) break;
    result.restarts = restart + 1;
    CounterRng rng(derive_seed(seed, "ham-restart", static_cast<std::uint64_t>(restart)));
    auto succ = random_cycle_cover(d, rng());
    if (succ.empty()) return proven("no spanning 1-factor");
    patch_cycles(d, succ, rng);
    TourSearch search(d, join_cycles(d, cycles_of(succ)), rng);
    if (search.run(max_moves, deadline)) {
      result.status = HamStatus::Found;
      result.cycle = HamCycle{search.order()}.canonical();
      result.reason = "heuristic";
      return result;
    }
  }

  if (n <= budget.exact_threshold) {
    ExactSearch exact(d, budget.node_limit, deadline);
    const bool ok = exact.run();
    result.nodes = exact.nodes();
    if (ok) {
      result.status = HamStatus::Found;
      result.cycle = HamCycle{exact.path()}.canonical();
      result.reason = "exact search";
      return result;
    }
    if (!exact.aborted()) return proven("exhaustive search");
    result.reason = "exact search budget exhausted";
    return result;
  }
  result.reason = deadline.passed() ? "time hint reached" : "heuristic restarts exhausted";
  return result;
}

namespace {

void check_count_size(const Digraph& d) {
  if (d.n() > kCountLimit)
    throw SizeLimit("Hamilton cycle counting limited to n <= " + std::to_string(kCountLimit) + ", got " +
                    std::to_string(d.n()));
}

// Masks over vertices 1..n-1 (bit v-1 for vertex v).
std::vector<std::uint32_t> masks(const Digraph& d, bool incoming) {
  std::vector<std::uint32_t> out(static_cast<std::size_t>(d.n()), 0);
  for (Vertex v = 0; v < d.n(); ++v)
    (incoming ? d.in(v) : d.out(v)).for_each([&](int u) {
      if (u != 0) out[static_cast<std::size_t>(v)] |= std::uint32_t{1} << (u - 1);
    });
  return out;
}

BigInt close_cycles(const Digraph& d, const std::vector<std::uint64_t>& dp, std::uint32_t full, int k) {
  unsigned __int128 total = 0;
  for (int i = 0; i < k; ++i)
    if (d.has_arc(i + 1, 0)) total += dp[static_cast<std::size_t>(full) * static_cast<std::size_t>(k) + static_cast<std::size_t>(i)];
  BigInt out = static_cast<std::uint64_t>(total >> 64);
  out <<= 64;
  out += static_cast<std::uint64_t>(total);
  return out;
}

}  // namespace

// dp[S][v]: paths 0 -> ... -> v whose internal vertex set plus v is exactly S.
// With n <= 22 every entry is at most 20!, which fits in 64 bits.
BigInt count_hamilton_reference(const Digraph& d) {
  check_count_size(d);
  const int n = d.n();
  if (n < 2) return 0;
  const int k = n - 1;
  const std::uint32_t full = (std::uint32_t{1} << k) - 1;
  const auto out = masks(d, false);
  std::vector<std::uint64_t> dp((static_cast<std::size_t>(full) + 1) * static_cast<std::size_t>(k), 0);
  for (int v = 1; v < n; ++v)
    if (d.has_arc(0, v)) dp[(std::size_t{1} << (v - 1)) * static_cast<std::size_t>(k) + static_cast<std::size_t>(v - 1)] = 1;
  for (std::uint32_t s = 1; s <= full; ++s)
    for (std::uint32_t rest = s; rest; rest &= rest - 1) {
      const int i = std::countr_zero(rest);
      const std::uint64_t ways = dp[static_cast<std::size_t>(s) * static_cast<std::size_t>(k) + static_cast<std::size_t>(i)];
      if (ways == 0) continue;
      for (std::uint32_t next = out[static_cast<std::size_t>(i + 1)] & ~s; next; next &= next - 1) {
        const int j = std::countr_zero(next);
        dp[static_cast<std::size_t>(s | (std::uint32_t{1} << j)) * static_cast<std::size_t>(k) + static_cast<std::size_t>(j)] += ways;
      }
    }
  return close_cycles(d, dp, full, k);
}

BigInt count_hamilton_exact(const Digraph& d) {
  check_count_size(d);
  const int n = d.n();
  if (n < 2) return 0;
  const int k = n - 1;
  const std::uint32_t full = (std::uint32_t{1} << k) - 1;
  const auto in = masks(d, true);
  std::vector<std::uint64_t> dp((static_cast<std::size_t>(full) + 1) * static_cast<std::size_t>(k), 0);
  for (int v = 1; v < n; ++v)
    if (d.has_arc(0, v)) dp[(std::size_t{1} << (v - 1)) * static_cast<std::size_t>(k) + static_cast<std::size_t>(v - 1)] = 1;
  // Pull form: layer |S| only reads layer |S| - 1, so each layer is a
  // parallel loop with no write conflicts.
  for (int layer = 2; layer <= k; ++layer) {
#pragma omp parallel for schedule(static, 4096)
    for (std::int64_t si = 1; si <= static_cast<std::int64_t>(full); ++si) {
      const auto s = static_cast<std::uint32_t>(si);
      if (std::popcount(s) != layer) continue;
      for (std::uint32_t rest = s; rest; rest &= rest - 1) {
        const int i = std::countr_zero(rest);
        const std::uint32_t prev = s & ~(std::uint32_t{1} << i);
        std::uint64_t ways = 0;
        for (std::uint32_t from = in[static_cast<std::size_t>(i + 1)] & prev; from; from &= from - 1)
          ways += dp[static_cast<std::size_t>(prev) * static_cast<std::size_t>(k) + static_cast<std::size_t>(std::countr_zero(from))];
        dp[static_cast<std::size_t>(s) * static_cast<std::size_t>(k) + static_cast<std::size_t>(i)] = ways;
      }
    }
  }
  return close_cycles(d, dp, full, k);
}

}  // namespace hampack
