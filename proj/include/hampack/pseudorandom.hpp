#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hampack/digraph.hpp"
#include "hampack/params.hpp"
#include "hampack/pipelines.hpp"

namespace hampack {

/// Polylog exponents of the pseudo-randomness conditions, as exact
/// fractions. Never recompute these inline.
struct Exponent {
  std::string_view where;
  int num;
  int den;
  constexpr double value() const { return static_cast<double>(num) / den; }
};

/// e_D(X) <= (1 - λ)|X| log^8.02 n
inline constexpr Exponent kExpP2{"P2 edge bound", 401, 50};
/// e_D(X) <= |X| log^2.1 n, also property (B) of the contracted digraph
inline constexpr Exponent kExpP2Star{"P2* edge bound", 21, 10};
/// |X|, |Y| >= log^1.1 n / p
inline constexpr Exponent kExpP3{"P3 set size", 11, 10};
/// intermediate bound in the proof of (B)
inline constexpr Exponent kExpB{"(B) intermediate", 161, 20};
/// e_Fj(X, Y) <= min(|X|, |Y|) log^2.05 n, property (ii)
inline constexpr Exponent kExpLayer{"(ii) layer bound", 41, 20};

enum class Verdict { ExhaustivePass, SampledPass, Violation };

/// Sets or vertex that break a condition, with the measured value and the
/// interval it had to lie in.
struct Witness {
  std::vector<Vertex> x;
  std::vector<Vertex> y;
  Vertex vertex = -1;
  /// For degree witnesses: out-degree when set, in-degree otherwise.
  bool out = true;
  std::int64_t value = 0;
  double lower = 0.0;
  double upper = 0.0;
};

enum class CheckKind { Degree, Within, Between };

struct PropertyCheck {
  std::string name;
  CheckKind kind = CheckKind::Degree;
  Verdict verdict = Verdict::ExhaustivePass;
  /// "enumeration", "degree bound", "vacuous", "samples" or "all vertices".
  std::string method;
  std::int64_t trials = 0;
  std::optional<Witness> witness;

  bool passed() const { return verdict != Verdict::Violation; }
  /// "exhaustive-pass", "sampled-pass(N)" or "violation".
  std::string label() const;
};

/// Recomputes the witness quantity on `d` and confirms it falls outside its
/// interval. False when there is no witness.
bool revalidate(const Digraph& d, const PropertyCheck& check);

struct PseudoBudget {
  /// Random subsets (or pairs of subsets) per sampled condition.
  std::int64_t samples = 10'000;
  /// Exhaustive enumeration runs when it needs at most this many subsets.
  std::int64_t exhaustive_limit = std::int64_t{1} << 20;
  Seed seed = 0;
};

struct PseudoRandomReport {
  int n = 0;
  double lambda = 0.0;
  double p = 0.0;
  bool p1_ok = false;
  /// Vertex whose degree is furthest from np, and that degree.
  Vertex extremal = -1;
  int extremal_degree = 0;
  PropertyCheck p1;
  PropertyCheck p2;
  PropertyCheck p3;

  bool passes() const { return p1.passed() && p2.passed() && p3.passed(); }
};

/// (P1) exactly over all degrees; (P2), (P3) exhaustively when feasible,
/// otherwise by random subsets within the budget.
PseudoRandomReport check_pseudorandom(const Digraph& d, double lambda, double p, const PseudoBudget& budget = {});

struct HamiltonConditionsReport {
  int n = 0;
  double lambda = 0.0;
  double p = 0.0;
  PropertyCheck p1;
  PropertyCheck p2_star;
  PropertyCheck p3_star;
  /// p >= log^8 n / n, the desk-scale stand-in for p = ω(log^8 n / n).
  double density_floor = 0.0;
  bool density_floor_ok = false;
  /// All three conditions hold and λ < 1/10.
  bool conditions_hold = false;
  /// conditions_hold and the density floor is met.
  bool predicts_hamiltonian = false;
  /// Result of find_hamilton when confirmation was requested.
  std::optional<bool> confirmed;
};

HamiltonConditionsReport check_thm62_conditions(const Digraph& d, double lambda, double p,
                                                const PseudoBudget& budget = {}, bool confirm = false);

/// Packing for pseudo-random digraphs: p is read off the arc density and
/// the pack-pseudo parameter policy supplies the per-layer target L.
/// The caller is expected to have run check_pseudorandom at this λ.
PackReport pack_pseudorandom(const Digraph& d, double lambda, Seed seed, const RunOptions& options = {},
                             const PolicyOverrides& overrides = {});

struct LemmaCheck {
  std::string lemma;
  std::string property;
  int trials = 0;
  int passed = 0;
  /// How the last trial decided the property.
  std::string method;
};

struct AppendixReport {
  double lambda = 0.0;
  /// Keep-probability of the random sub-digraph C and the resulting p'.
  double q = 0.0;
  double p_prime = 0.0;
  /// p / log^6 n, for comparison with the desk-scale p'.
  double p_prime_literal = 0.0;
  std::vector<LemmaCheck> checks;
};

/// Statistical test of the two structural lemmas behind the pseudo-random
/// packing: builds their random objects `trials` times and reports how
/// often each property holds.
AppendixReport validate_appendix_lemmas(const Digraph& d, double lambda, const ExperimentParams& params, int trials,
                                        Seed seed, const PseudoBudget& budget = {});

}  // namespace hampack
