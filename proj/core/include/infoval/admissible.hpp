#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "infoval/inspect.hpp"

namespace infoval {

/// A purchase protocol as explicit lookup tables. tables[s] maps the packed
/// stage-s context (observed ladder prefix class plus the purchased choices
/// and revealed values above stage s) to a subset mask of offer level s-1;
/// tables[0] maps to an action index. A decision never sees the unpurchased
/// contents of the offer level aimed at it, which is exactly the
/// admissibility restriction.
struct AdmissibleProtocol {
  std::vector<std::map<std::string, std::uint32_t>> tables;
};

/// Enumerates every admissible protocol over the reachable contexts of an
/// instance, in a deterministic order. Counting happens first: a dry pass
/// that exceeds `protocol_budget` throws BudgetExceeded with the count it
/// reached.
class AdmissibleEnumerator {
 public:
  AdmissibleEnumerator(const DecisionProblem& problem, const SampleSpace& space,
                       const OfferLadder& ladder, int depth,
                       std::uint64_t protocol_budget = 1'000'000);

  /// Exact number of protocols; throws BudgetExceeded past the budget.
  std::uint64_t count();

  /// Visits every protocol. Throws BudgetExceeded before visiting anything
  /// when the count is over budget.
  void enumerate(const std::function<void(const AdmissibleProtocol&)>& sink);

  /// Exact ex-ante expected utility of a protocol.
  double evaluate(const AdmissibleProtocol& protocol);

  /// Interpolated protocol: stages above n play the tables, stages n and
  /// below play the recursive-inspection optimum. n = -1 is the protocol
  /// itself, n = depth is the recursive protocol.
  double evaluate_interpolated(const AdmissibleProtocol& protocol, int n);

  /// True when the protocol reproduces the recursive protocol's playout plan
  /// on every positive-mass outcome.
  bool matches_recursive(const AdmissibleProtocol& protocol);

 private:
  PurchasePlan protocol_playout(const AdmissibleProtocol& protocol, std::size_t outcome,
                                int interpolate_from);

  const DecisionProblem& problem_;
  const SampleSpace& space_;
  const OfferLadder& ladder_;
  int depth_;
  std::uint64_t budget_;
  RecursiveEngine engine_;
};

/// Result of the ex-ante superiority check on one instance.
struct SuperiorityReport {
  std::uint64_t protocols = 0;
  double recursive_value = 0.0;
  double best_admissible_value = 0.0;
  /// min over protocols of (recursive value - protocol value); theorem says >= 0.
  double min_margin = 0.0;
  /// min over protocols and adjacent interpolation steps of the step gain.
  double min_chain_slack = 0.0;
  bool recursive_included = false;
  int violations = 0;
};

/// Exhaustively compares the recursive protocol against every admissible
/// protocol and checks that the interpolated chain is monotone.
SuperiorityReport verify_exante_superiority(const DecisionProblem& problem,
                                            const SampleSpace& space, const OfferLadder& ladder,
                                            int depth,
                                            std::uint64_t protocol_budget = 1'000'000,
                                            double tolerance = kValueTolerance);

}  // namespace infoval
