#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hampack/error.hpp"

namespace hampack {

enum class Task { Pack, Cover, Count, PackPseudo };

std::string_view task_name(Task task);
/// Accepts "pack", "cover", "count", "pack-pseudo" (or "pack_pseudo").
Task parse_task(std::string_view name);

/// One hypothesis of the asymptotic argument evaluated at the concrete
/// scalars: it holds when lhs >= rhs, and ratio = lhs / rhs is the slack.
struct SlackEntry {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds() const { return lhs >= rhs; }
  double ratio() const { return rhs > 0 ? lhs / rhs : 0.0; }
};

struct ExperimentParams {
  Task task = Task::Pack;
  int n = 0;
  double p = 0.0;
  double alpha = 2.0;
  int ell = 0;
  int s = 0;
  int m = 0;
  int t = 1;
  /// Probability that an arc of the template lands in a given subdigraph
  /// (interior / exterior class). For pack and cover this includes the
  /// factor p; for pack-pseudo it is the sub-sampling rate alone.
  double p_in = 0.0;
  double p_ex = 0.0;
  double lambda = 0.0;
  double p_prime = 0.0;
  /// Predicted matchings per layer.
  int L = 0;
  /// Predicted completion degree (cover).
  int r = 0;
  /// Predicted task outcome: cycles for pack and cover, unused otherwise.
  double predicted = 0.0;
  /// Partitions sampled by count_certify.
  int partitions = 8;
  std::vector<SlackEntry> slack;

  /// Throws InvalidParameter when an invariant (n = mℓ + s, 0 < p_in, p_ex
  /// <= 1, t >= 1, positive sizes) is broken.
  void validate() const;
};

/// parameter_policy declined to run: the density is below the task's floor.
class PolicyRefusal : public Error {
 public:
  using Error::Error;
};

struct PolicyOverrides {
  std::optional<double> alpha;
  std::optional<int> ell;
  std::optional<int> s;
  std::optional<int> t;
  std::optional<double> lambda;
};

/// Concrete scalars for a task at (n, p). The literal asymptotic choices
/// leave no matchings at desk scale, so ℓ, s and t are chosen by maximising
/// (pack) or minimising (cover) a closed-form yield model; the literal
/// values and every hypothesis inequality are recorded in `slack`.
ExperimentParams parameter_policy(int n, double p, Task task, const PolicyOverrides& overrides = {});

/// Resolves s to the nearest value s' = s ± k with (n - s') divisible by ℓ,
/// preferring s' >= 1.
int adjust_s(int n, int ell, int s);

/// Probability that an arc of the complete digraph on n vertices is interior
/// (resp. exterior) in a uniformly random (ℓ, s)-partition.
double interior_probability(int n, int ell, int s);
double exterior_probability(int n, int ell, int s);

}  // namespace hampack
