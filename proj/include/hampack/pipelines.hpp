#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hampack/bigint.hpp"
#include "hampack/contraction.hpp"
#include "hampack/digraph.hpp"
#include "hampack/hamilton.hpp"
#include "hampack/params.hpp"
#include "hampack/partition.hpp"
#include "hampack/rng.hpp"

namespace hampack {

enum class AssignMode { Pack, Cover };

/// Per-arc replication lists over t <= 64 partitions, stored as bitmasks
/// (bit i set iff the arc is interior / exterior in partition i).
struct EdgeAssignment {
  int t = 0;
  AssignMode mode = AssignMode::Pack;
  std::vector<Arc> arcs;
  std::vector<std::uint64_t> interior;
  std::vector<std::uint64_t> exterior;
  /// h(e): the subdigraph receiving the arc. In pack mode an arc with A_e
  /// and B_e both empty goes to a uniform index (it is in no template there,
  /// so no stage uses it); in cover mode an arc with A_e empty gets -1.
  std::vector<int> chosen;
  std::int64_t unplaced = 0;

  std::vector<int> A(std::size_t e) const;
  std::vector<int> B(std::size_t e) const;
};

/// Distribution of |A_e| and |B_e| over the arcs of D against the exact
/// expectations t·q_A and t·q_B. An arc is in band when its count lies
/// within (1 ± 0.5) of the expectation; the check passes when the in-band
/// fractions are no more than `tolerance` below their binomial values.
struct BalanceReport {
  double expected_a = 0.0;
  double expected_b = 0.0;
  double in_band_a = 0.0;
  double in_band_b = 0.0;
  double binomial_band_a = 0.0;
  double binomial_band_b = 0.0;
  double tolerance = 0.05;
  int resamples = 0;
  bool ok = false;
};

BalanceReport check_balance(const Digraph& d, const std::vector<PartitionScheme>& partitions);

/// t independent uniform partitions, resampled until check_balance passes.
/// Throws SetupFailure after `max_resamples` failed draws.
std::vector<PartitionScheme> sample_partitions(const Digraph& d, const ExperimentParams& params, Seed seed,
                                               BalanceReport* balance = nullptr, int max_resamples = 5);

struct AssignmentResult {
  EdgeAssignment assignment;
  std::vector<Digraph> subdigraphs;
};

/// Pack: each arc goes to one subdigraph, an element of A_e with
/// probability (1 - 1/alpha)/|A_e| and of B_e with probability
/// 1/(alpha |B_e|), the whole mass going to the non-empty list when the
/// other is empty. Cover: interior label uniform over A_e, and every arc
/// exterior in partition i is also added to subdigraph i.
AssignmentResult assign_edges(const Digraph& d, const std::vector<PartitionScheme>& partitions, AssignMode mode,
                              double alpha, Seed seed);

/// The ℓ - 1 layers E(V_j, V_j+1) of `d` as bipartite graphs; left index a
/// of layer j is block(j)[a], right index b is block(j+1)[b].
std::vector<BipartiteGraph> layers_of(const Digraph& d, const PartitionScheme& v);

/// Chains one perfect matching per layer into m paths V1 -> ... -> Vℓ.
PathSystem chain_matchings(const PartitionScheme& v, const std::vector<std::vector<int>>& partner_of_left);

struct PathSystemsResult {
  std::vector<PathSystem> systems;
  /// Disjoint matchings per layer before truncation to the common L.
  std::vector<int> layer_matchings;
  int L = 0;
  int r = 0;
  /// Layer edges left out because the completion host could not absorb
  /// them (covering variant only).
  std::int64_t deferred = 0;
  bool completion_failed = false;
  std::vector<std::string> notes;
};

/// Packing variant: L pairwise edge-disjoint systems; system k uses the k-th
/// matching of every layer. `target` < 0 asks for as many as possible.
PathSystemsResult build_path_systems(const PartitionScheme& v, const std::vector<BipartiteGraph>& layers, int target,
                                     Seed seed);

/// Covering variant: L disjoint matchings per layer, then the leftover H_j
/// completed to an r_j-factor inside `hosts[j]` and split by Hall, r_j the
/// least feasible value in [Δ(H_j), 2Δ(H_j)]. There are L + max r_j systems;
/// a layer with r_j below the maximum repeats its matchings. When no r_j
/// works, H_j is trimmed to a degree the host supports and the trimmed edges
/// are counted in `deferred`. Every other layer edge lies in some system.
PathSystemsResult build_covering_systems(const PartitionScheme& v, const std::vector<BipartiteGraph>& layers,
                                         const std::vector<BipartiteGraph>& hosts, Seed seed);

struct RunOptions {
  /// Worker threads for independent tasks; 1 runs the serial loop.
  int jobs = 0;
  SolverBudget budget{200'000, 6, 0.0, 40};
  /// Retries after a failed stage, each with a derived seed.
  int retries = 3;
};

struct SubdigraphOutcome {
  int index = 0;
  std::int64_t arcs = 0;
  int L = 0;
  int r = 0;
  int systems = 0;
  int cycles = 0;
  int retries = 0;
  int failures = 0;
  std::vector<std::string> notes;
};

struct AuditResult {
  bool ok = true;
  std::vector<std::string> issues;
};

struct PackReport {
  ExperimentParams params;
  Seed seed = 0;
  BalanceReport balance;
  std::vector<SubdigraphOutcome> parts;
  std::vector<HamCycle> cycles;
  AuditResult audit;

  int achieved() const { return static_cast<int>(cycles.size()); }
  int retries() const;
  int failures() const;
};

struct CoverReport {
  ExperimentParams params;
  Seed seed = 0;
  BalanceReport balance;
  std::vector<SubdigraphOutcome> parts;
  std::vector<HamCycle> cycles;
  int pipeline_cycles = 0;
  int patch_cycles = 0;
  /// Arcs never interior in any partition (A_e empty).
  std::int64_t never_interior = 0;
  std::vector<Arc> uncovered;
  AuditResult audit;

  int achieved() const { return static_cast<int>(cycles.size()); }
  int retries() const;
  int failures() const;
};

struct PartitionCount {
  int index = 0;
  /// Sorted blocks V0, V1, ..., Vℓ of the partition.
  std::vector<std::vector<Vertex>> blocks;
  bool duplicate = false;
  bool discarded = false;
  /// Natural log of the perfect-matching count of every layer (exact).
  std::vector<double> layer_log_pms;
  /// Disjoint matchings found per layer and the resulting van der Waerden
  /// bound on the matchings of that r-regular subgraph.
  std::vector<int> layer_regular_degree;
  double log_systems = 0.0;
  double log_systems_vdw = 0.0;
  /// "exhaustive" (every path system counted exactly) or "sampled".
  std::string method;
  /// Exhaustive: number of Hamilton cycles of D ∩ D_n(V). Sampled: distinct
  /// verified cycles found.
  BigInt hamilton = 0;
  std::int64_t systems_examined = 0;
  int completions_checked = 0;
  int completions_verified = 0;
  std::string note;
};

struct CountCertificate {
  ExperimentParams params;
  Seed seed = 0;
  std::vector<Vertex> v0;
  std::vector<PartitionCount> partitions;
  /// Sum over distinct sampled partitions sharing V0; their Hamilton cycle
  /// sets are disjoint, so this is a lower bound on #HC(D).
  BigInt certified = 0;
  double log_certified = 0.0;
  std::optional<BigInt> exact;
  double log_exact = 0.0;
  /// log(n! p^n).
  double log_reference = 0.0;
  /// log((n - s)! / (m!)^ℓ): partitions with this V0.
  double log_partition_count = 0.0;
  /// log_partition_count + log(mean cycles per sampled partition); not
  /// verified, bookkeeping only.
  double log_extrapolated = 0.0;
  bool bound_holds = true;
};

PackReport pack(const Digraph& d, const ExperimentParams& params, Seed seed, const RunOptions& options = {});
CoverReport cover(const Digraph& d, const ExperimentParams& params, Seed seed, const RunOptions& options = {});
CountCertificate count_certify(const Digraph& d, const ExperimentParams& params, Seed seed, int partitions_sample,
                               const RunOptions& options = {});

/// Every cycle verified on D and no arc used twice.
AuditResult audit_disjoint(const Digraph& d, const std::vector<HamCycle>& cycles);
/// Every cycle verified on D; `uncovered` receives arcs in no cycle.
AuditResult audit_cover(const Digraph& d, const std::vector<HamCycle>& cycles, std::vector<Arc>* uncovered = nullptr);

}  // namespace hampack
