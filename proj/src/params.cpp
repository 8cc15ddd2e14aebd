#include "hampack/params.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hampack {

std::string_view task_name(Task task) {
  switch (task) {
    case Task::Pack: return "pack";
    case Task::Cover: return "cover";
    case Task::Count: return "count";
    case Task::PackPseudo: return "pack-pseudo";
  }
  return "?";
}

Task parse_task(std::string_view name) {
  if (name == "pack") return Task::Pack;
  if (name == "cover") return Task::Cover;
  if (name == "count") return Task::Count;
  if (name == "pack-pseudo" || name == "pack_pseudo") return Task::PackPseudo;
  throw InvalidParameter("unknown task '" + std::string(name) + "'");
}

void ExperimentParams::validate() const {
  if (n < 2 || ell < 2 || s < 1 || m < 1) throw InvalidParameter("partition sizes must be positive with ell >= 2");
  if (n != m * ell + s) throw InvalidParameter("n must equal m*ell + s");
  if (t < 1) throw InvalidParameter("t must be at least 1");
  if (!(p > 0.0 && p <= 1.0)) throw InvalidParameter("p must lie in (0, 1]");
  if (!(p_in > 0.0 && p_in <= 1.0) || !(p_ex > 0.0 && p_ex <= 1.0))
    throw InvalidParameter("p_in and p_ex must lie in (0, 1]");
  if (alpha <= 1.0) throw InvalidParameter("alpha must exceed 1");
}

int adjust_s(int n, int ell, int s) {
  if (ell < 2 || n < ell + 1) throw InvalidParameter("no (ell, s)-partition exists for these sizes");
  s = std::clamp(s, 1, n - ell);
  for (int k = 0; k < ell; ++k) {
    if (s - k >= 1 && (n - (s - k)) % ell == 0) return s - k;
    if (s + k <= n - ell && (n - (s + k)) % ell == 0) return s + k;
  }
  throw InvalidParameter("could not make n - s divisible by ell");
}

double interior_probability(int n, int ell, int s) {
  const double m = static_cast<double>(n - s) / ell;
  return (ell - 1) * m * m / (static_cast<double>(n) * (n - 1));
}

double exterior_probability(int n, int ell, int s) {
  const double m = static_cast<double>(n - s) / ell;
  return (m * m + 2.0 * s * m + s * (s - 1.0)) / (static_cast<double>(n) * (n - 1));
}

namespace {

// E[1 / (1 + Bin(k, q))].
double mean_inverse(int k, double q) {
  if (k == 0 || q <= 0.0) return 1.0;
  return (1.0 - std::pow(1.0 - q, k + 1)) / ((k + 1) * q);
}

// Leading terms of the expected maximum of `count` standard normals.
double extreme_shift(double count) {
  if (count < 3) return 0.5;
  const double a = std::sqrt(2.0 * std::log(count));
  return a - (std::log(std::log(count)) + std::log(4.0 * std::acos(-1.0))) / (2.0 * a);
}

struct Shape {
  int ell = 0;
  int s = 0;
  int m = 0;
  int t = 0;
  double p_in = 0.0;
  double p_ex = 0.0;
  double layer_min = 0.0;
  double layer_max = 0.0;
  double uncovered = 0.0;
  double value = 0.0;
};

// Packing split: an arc with both lists non-empty goes interior with
// weight 1 - 1/alpha; a lone list takes all the weight.
Shape pack_model(int n, double p, double alpha, int ell, int s, int t) {
  Shape sh{ell, s, (n - s) / ell, t};
  const double qa = interior_probability(n, ell, s);
  const double qb = exterior_probability(n, ell, s);
  const int k = t - 1;
  const double b_nonempty = 1.0 - std::pow(1.0 - qb, k);
  const double a_nonempty = 1.0 - std::pow(1.0 - qa, k);
  sh.p_in = p * mean_inverse(k, qa) * (1.0 - b_nonempty / alpha);
  sh.p_ex = p * mean_inverse(k, qb) * (1.0 - a_nonempty * (1.0 - 1.0 / alpha));
  const double mu = sh.m * sh.p_in;
  const double sigma = std::sqrt(mu * (1.0 - sh.p_in));
  sh.layer_min = mu - sigma * extreme_shift(2.0 * sh.m * (ell - 1));
  const double mu_ex = (s + sh.m) * sh.p_ex;
  const double ext_min = mu_ex - std::sqrt(mu_ex * (1.0 - sh.p_ex)) * extreme_shift(2.0 * (s + sh.m));
  // Exterior arcs are consumed one per contracted vertex per cycle; keep
  // a margin for the sparse tail of the sequential completion.
  sh.value = t * std::floor(std::max(0.0, std::min(sh.layer_min, 0.8 * ext_min)));
  return sh;
}

inline constexpr double kCoverMaxUncovered = 0.6;
inline constexpr double kPatchArcsPerCycle = 0.55;

// Covering split: interior label uniform over A_e, exterior arcs
// shared. Arcs with A_e empty go to the patch pass, each patch cycle
// absorbing about 0.55n of them.
Shape cover_model(int n, double p, int ell, int s, int t) {
  Shape sh{ell, s, (n - s) / ell, t};
  const double qa = interior_probability(n, ell, s);
  sh.p_in = p * mean_inverse(t - 1, qa);
  sh.p_ex = p;
  const double mu = sh.m * sh.p_in;
  const double sigma = std::sqrt(mu * (1.0 - sh.p_in));
  const double shift = extreme_shift(2.0 * sh.m * (ell - 1));
  sh.layer_min = mu - sigma * shift;
  sh.layer_max = mu + sigma * shift;
  sh.uncovered = std::pow(1.0 - qa, t);
  const double arcs = static_cast<double>(n) * (n - 1) * p;
  const double patch = sh.uncovered * arcs / (kPatchArcsPerCycle * n) + (sh.uncovered > 0 ? 2.0 : 0.0);
  sh.value = t * std::ceil(sh.layer_max) + patch;
  return sh;
}

std::vector<int> candidate_s(int n, int ell, std::initializer_list<double> fractions) {
  std::vector<int> out;
  for (double f : fractions) {
    const int raw = std::max(1, static_cast<int>(std::lround(f * n)));
    if (n - raw < 2 * ell) continue;
    const int s = adjust_s(n, ell, raw);
    if ((n - s) / ell < 2) continue;
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
  }
  return out;
}

template <class Model, class Better>
Shape search(int n, const PolicyOverrides& ov, std::initializer_list<double> fractions, int t_max, Model model,
             Better better) {
  Shape best;
  bool have = false;
  const int ell_lo = ov.ell.value_or(2);
  const int ell_hi = ov.ell.value_or(8);
  for (int ell = ell_lo; ell <= ell_hi; ++ell) {
    if (n < 3 * ell) break;
    std::vector<int> ss = ov.s ? std::vector<int>{adjust_s(n, ell, *ov.s)} : candidate_s(n, ell, fractions);
    for (int s : ss) {
      const int t_lo = ov.t.value_or(1);
      const int t_hi = ov.t.value_or(t_max);
      for (int t = t_lo; t <= t_hi; ++t) {
        Shape sh = model(ell, s, t);
        if (!have || better(sh, best)) {
          best = sh;
          have = true;
        }
      }
    }
  }
  if (!have) throw InvalidParameter("no admissible (ell, s, t) for n = " + std::to_string(n));
  return best;
}

void add(ExperimentParams& ep, std::string name, double lhs, double rhs) {
  ep.slack.push_back({std::move(name), lhs, rhs});
}

// Smallest alpha in [2, 64] for which every literal inequality holds, else 2.
template <class Check>
double choose_alpha(Check holds_at) {
  for (double a = 2.0; a <= 64.0; a += 0.25)
    if (holds_at(a)) return a;
  return 2.0;
}

}  // namespace

ExperimentParams parameter_policy(int n, double p, Task task, const PolicyOverrides& ov) {
  if (!(p > 0.0 && p <= 1.0)) throw InvalidParameter("p must lie in (0, 1]");
  const double ln = std::log(static_cast<double>(n));
  const double np = n * p;
  const int n_floor = task == Task::Count ? 8 : 50;
  if (n < n_floor)
    throw PolicyRefusal(std::string(task_name(task)) + " needs n >= " + std::to_string(n_floor) + ", got " +
                        std::to_string(n));

  ExperimentParams ep;
  ep.task = task;
  ep.n = n;
  ep.p = p;
  ep.lambda = ov.lambda.value_or(task == Task::PackPseudo ? 0.05 : 0.0);
  ep.p_prime = p / std::pow(ln, 6);

  auto refuse_below = [&](double floor_np, const char* what) {
    if (np < floor_np)
      throw PolicyRefusal(std::string(task_name(task)) + ": np = " + std::to_string(np) + " is below the floor " +
                          what + " = " + std::to_string(floor_np));
  };

  switch (task) {
    case Task::Pack:
    case Task::PackPseudo: {
      refuse_below(4.0 * ln, "4 log n");
      if (task == Task::Pack) {
        ep.alpha = ov.alpha.value_or(choose_alpha([&](double a) { return p >= std::pow(a, 6) * std::pow(ln, 4) / n; }));
      } else {
        ep.alpha = ov.alpha.value_or(choose_alpha([&](double a) {
          const double pp = ep.p_prime;
          return p >= std::pow(ln, 14) / n && std::sqrt(n / (a * pp)) < n;
        }));
      }
      const double alpha = ep.alpha;
      const Shape sh = search(
          n, ov, {0.01, 0.02, 0.035, 0.05, 0.075, 0.1, 0.15, 0.2, 0.25}, 12,
          [&](int ell, int s, int t) { return pack_model(n, p, alpha, ell, s, t); },
          [](const Shape& a, const Shape& b) { return a.value > b.value; });
      if (sh.value < 1.0)
        throw PolicyRefusal(std::string(task_name(task)) + ": the yield model predicts no cycles at n = " +
                            std::to_string(n) + ", p = " + std::to_string(p));
      ep.ell = sh.ell;
      ep.s = sh.s;
      ep.m = sh.m;
      ep.t = sh.t;
      ep.p_in = sh.p_in;
      ep.p_ex = sh.p_ex;
      ep.L = static_cast<int>(std::max(0.0, std::floor(sh.layer_min)));
      ep.predicted = sh.value;
      const double m = ep.m;
      const double s = ep.s;
      const double ell = ep.ell;
      if (task == Task::Pack) {
        add(ep, "p >= alpha^6 log^4 n / n", p, std::pow(alpha, 6) * std::pow(ln, 4) / n);
        add(ep, "p_in >= log n / m", ep.p_in, ln / m);
        add(ep, "p_ex >= m p_in log n / (m + s)", ep.p_ex, m * ep.p_in * ln / (m + s));
        add(ep, "t >= ell log n", ep.t, ell * ln);
        add(ep, "t >= (n/s)^2 log n", ep.t, (n / s) * (n / s) * ln);
        add(ep, "s >= m", s, m);
        add(ep, "m p_in t vs (n - s) p", m * ep.p_in * ep.t, (n - s) * p);
        add(ep, "ell vs alpha^3 log n", ell, std::pow(alpha, 3) * ln);
        add(ep, "s vs n / (alpha^2 log n)", s, n / (alpha * alpha * ln));
        add(ep, "t vs alpha^5 log^3 n", ep.t, std::pow(alpha, 5) * std::pow(ln, 3));
      } else {
        // Sub-sampling rates without the factor p, as in the pseudo-random
        // argument; the matching target is (1 - 4λ) m p p_in.
        ep.p_in = sh.p_in / p;
        ep.p_ex = sh.p_ex / p;
        ep.L = static_cast<int>(std::floor((1.0 - 4.0 * ep.lambda) * m * p * ep.p_in));
        const double s_lit = std::sqrt(n / (alpha * ep.p_prime));
        add(ep, "p >= log^14 n / n", p, std::pow(ln, 14) / n);
        add(ep, "1/100 > lambda", 0.01, ep.lambda);
        add(ep, "t vs alpha ell^2 log n", ep.t, alpha * ell * ell * ln);
        add(ep, "s vs sqrt(n / (alpha p'))", s, s_lit);
        add(ep, "m vs s / log n", m, s / ln);
        add(ep, "p_in vs 1 / (alpha ell log n)", ep.p_in, 1.0 / (alpha * ell * ln));
        add(ep, "p_ex vs n^2 / (alpha^2 s^2 ell^2 log n)", ep.p_ex,
            std::min(1.0, n * n / (alpha * alpha * s * s * ell * ell * ln)));
        add(ep, "p_in t vs ell", ep.p_in * ep.t, ell);
      }
      break;
    }
    case Task::Cover: {
      refuse_below(2.0 * ln, "2 log n");
      ep.alpha = ov.alpha.value_or(choose_alpha([&](double a) { return p >= std::pow(a, 4) * ln * ln / n; }));
      const double arcs = static_cast<double>(n) * (n - 1) * p;
      const Shape sh = search(
          n, ov, {0.02, 0.03, 0.05, 0.075, 0.1, 0.15, 0.2, 0.3, 0.4, 0.5}, 24,
          [&](int ell, int s, int t) { return cover_model(n, p, ell, s, t); },
          [&](const Shape& a, const Shape& b) {
            auto ok = [](const Shape& x) {
              return x.uncovered <= kCoverMaxUncovered && x.layer_min >= 1.0;
            };
            const bool ok_a = ok(a);
            const bool ok_b = ok(b);
            if (ok_a != ok_b) return ok_a;
            return a.value < b.value;
          });
      ep.ell = sh.ell;
      ep.s = sh.s;
      ep.m = sh.m;
      ep.t = sh.t;
      ep.p_in = sh.p_in;
      ep.p_ex = sh.p_ex;
      ep.L = static_cast<int>(std::max(0.0, std::floor(sh.layer_min)));
      ep.r = static_cast<int>(std::ceil(sh.layer_max - std::max(0.0, std::floor(sh.layer_min))));
      ep.predicted = sh.value;
      const double m = ep.m;
      const double s = ep.s;
      const double alpha = ep.alpha;
      add(ep, "p >= alpha^4 log^2 n / n", p, std::pow(alpha, 4) * ln * ln / n);
      add(ep, "p_in >= log n / m", ep.p_in, ln / m);
      add(ep, "p_ex >= log n / (m + s)", ep.p_ex, ln / (m + s));
      add(ep, "t >= ell log n", ep.t, ep.ell * ln);
      add(ep, "ell vs alpha", ep.ell, alpha);
      add(ep, "s vs n / alpha", s, n / alpha);
      add(ep, "t vs alpha^2 log n", ep.t, alpha * alpha * ln);
      add(ep, "arcs never interior (expected)", sh.uncovered * arcs, 0.0);
      break;
    }
    case Task::Count: {
      refuse_below(ln, "log n");
      ep.alpha = ov.alpha.value_or(2.0);
      const double alpha = ep.alpha;
      int ell = ov.ell.value_or(0);
      int s = ov.s.value_or(std::max(1, static_cast<int>(std::lround(n / (alpha * ln)))));
      if (ell == 0) {
        // Layers of at least four vertices keep the per-layer permanents
        // informative when n is small.
        ell = static_cast<int>(std::lround(2.0 * alpha * ln));
        ell = std::max(2, std::min(ell, (n - s) / 4));
      }
      s = adjust_s(n, ell, s);
      ep.ell = ell;
      ep.s = s;
      ep.m = (n - s) / ell;
      ep.t = 1;
      ep.p_in = p;
      ep.p_ex = p;
      const double mu = ep.m * p;
      ep.L = static_cast<int>(std::max(0.0, std::floor(mu - std::sqrt(mu * (1 - p)) * extreme_shift(2.0 * ep.m * (ell - 1)))));
      add(ep, "n >= 50", n, 50);
      add(ep, "s vs n / (alpha log n)", s, n / (alpha * ln));
      add(ep, "ell vs 2 alpha log n", ell, 2.0 * alpha * ln);
      add(ep, "s >= m", s, ep.m);
      break;
    }
  }
  ep.validate();
  return ep;
}

}  // namespace hampack
