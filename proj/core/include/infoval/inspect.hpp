#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "infoval/ladder.hpp"

namespace infoval {

/// Backward-induction engine for the layered inspection game. Decisions run
/// from the top stage down: stage N (a subset of offer level N-1) is decided
/// first, stage 0 (the base action) last. At stage n the agent conditions on
/// the realized values of everything purchased at stages n+1..N, plus, in
/// generative mode, on the observed ladder prefix below its level; offer sets
/// above the level have been forgotten. Each stage maximizes the expected
/// value of optimal continuation net of prices, exhaustively over subsets.
///
/// The engine memoizes on (stage, ladder prefix class, purchased-values
/// event, remaining budget), so instances must fit in an OutcomeMask.
class RecursiveEngine {
 public:
  RecursiveEngine(const DecisionProblem& problem, const SampleSpace& space,
                  const OfferLadder& ladder, int depth,
                  std::optional<double> budget = std::nullopt,
                  OutcomeMask base_evidence = ~OutcomeMask(0));
  ~RecursiveEngine();

  RecursiveEngine(const RecursiveEngine&) = delete;
  RecursiveEngine& operator=(const RecursiveEngine&) = delete;

  int depth() const { return depth_; }

  /// Optimal expected value of play from stage `stage` given evidence.
  double stage_value(int stage, int variant, OutcomeMask values_event, double budget_left);

  /// The subset mask chosen at `stage` (ties: lowest mask, so declining wins).
  std::uint32_t stage_choice(int stage, int variant, OutcomeMask values_event,
                             double budget_left);

  /// Plays the whole protocol out at one outcome; decisions see only what the
  /// information structure allows, values resolve from the outcome.
  PurchasePlan playout(std::size_t outcome);

  /// Expected utility of the protocol: sum over outcomes of prior mass times
  /// realized plan value.
  double exante_value();

  double initial_budget() const { return budget_; }
  bool budget_active() const { return budget_active_; }

 private:
  struct Impl;
  const void* solve_stage(int stage, int variant, OutcomeMask values_event, double budget_left);

  const DecisionProblem& problem_;
  const SampleSpace& space_;
  const OfferLadder& ladder_;
  int depth_;
  double budget_;
  bool budget_active_;
  OutcomeMask base_;
  std::unique_ptr<Impl> impl_;
};

/// Depth-N recursive inspection at the designated true outcome.
PurchasePlan solve_recursive(const DecisionProblem& problem, const SampleSpace& space,
                             const OfferLadder& ladder, int depth, std::size_t true_outcome,
                             std::optional<double> budget = std::nullopt,
                             OutcomeMask base_evidence = ~OutcomeMask(0));

/// Levelwise successive inspection: the top choice is an unconditioned
/// argmax, and each lower choice conditions only on the values of the bundle
/// bought one level above it. Fixed-offers mode only.
PurchasePlan solve_successive(const DecisionProblem& problem, const SampleSpace& space,
                              const OfferLadder& ladder, int depth, std::size_t true_outcome);

/// Instrumental utility of a level-n bundle realized at an outcome: the
/// level-(n-1) value of the decision its information leads to, minus the
/// value of the uninformed decision, minus price; recursing down to the base
/// utility table at n = 0 (where `choice` is an action index).
double successive_level_utility(const DecisionProblem& problem, const SampleSpace& space,
                                const OfferLadder& ladder, int level, std::uint32_t choice,
                                std::size_t outcome);

/// Realized value of sitting at a node of the recursive game having already
/// bought `suffix_masks` (masks for the top levels, ordered by level
/// ascending; suffix_masks.back() is the top stage). Remaining decisions are
/// played optimally with values resolved at the true outcome. When the
/// suffix covers every level, `action` (if >= 0) pins the base action and the
/// result is the base utility minus all prices.
double node_value(const DecisionProblem& problem, const SampleSpace& space,
                  const OfferLadder& ladder, int depth,
                  const std::vector<std::uint32_t>& suffix_masks, int action,
                  std::size_t true_outcome);

/// Expected utility of the depth-N recursive protocol.
double recursive_exante_value(const DecisionProblem& problem, const SampleSpace& space,
                              const OfferLadder& ladder, int depth);

/// Expected instrumental utility E[U^n(x^n)] of each successive-protocol
/// purchase level n = 1..N, played out over all outcomes. Each entry is
/// nonnegative up to tolerance; verify suites assert it.
std::vector<double> successive_level_gains(const DecisionProblem& problem,
                                           const SampleSpace& space, const OfferLadder& ladder,
                                           int depth);

/// Benchmark value used by the negative test: per outcome, the best action
/// conditioned on every offered good's value, bought nothing, paid nothing.
double all_information_benchmark(const DecisionProblem& problem, const SampleSpace& space,
                                 const OfferLadder& ladder, int depth);

}  // namespace infoval
