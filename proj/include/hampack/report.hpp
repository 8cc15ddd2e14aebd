#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hampack/params.hpp"
#include "hampack/pipelines.hpp"
#include "hampack/pseudorandom.hpp"

namespace hampack {

using Json = nlohmann::json;

Json to_json(const ExperimentParams& params);
Json to_json(const BalanceReport& balance);
Json to_json(const SubdigraphOutcome& outcome);
Json to_json(const AuditResult& audit);
Json to_json(const PackReport& report, bool with_cycles = false);
Json to_json(const CoverReport& report, bool with_cycles = false);
Json to_json(const CountCertificate& cert);
Json to_json(const PropertyCheck& check);
Json to_json(const PseudoRandomReport& report);
Json to_json(const HamiltonConditionsReport& report);
Json to_json(const AppendixReport& report);

/// Where the digraph of a certificate came from.
struct GraphSource {
  /// "dnp" (sampled from n, p, seed) or "file".
  std::string kind = "dnp";
  double p = 0.0;
  Seed seed = 0;
  std::string path;
};

/// Re-checkable record of a run: the digraph's arcs, how it was generated,
/// and the claimed cycles (pack, cover) or per-partition counts (count).
Json make_certificate(const Digraph& d, const GraphSource& source, const PackReport& report);
Json make_certificate(const Digraph& d, const GraphSource& source, const CoverReport& report);
Json make_certificate(const Digraph& d, const GraphSource& source, const CountCertificate& cert);

struct VerifyResult {
  bool ok = true;
  /// Index of the first cycle (or partition) that failed.
  std::optional<int> bad_index;
  std::vector<std::string> issues;
};

/// Checks a certificate using only its own arc list: every cycle is a
/// Hamilton cycle of that digraph, plus the disjointness (pack) or coverage
/// (cover) audit. Count certificates are re-counted by dynamic programming
/// on each partition's template subgraph.
VerifyResult verify_certificate(const Json& certificate);

}  // namespace hampack
