#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "infoval/prob.hpp"

namespace infoval {

/// Comparison tolerance for utility/VOI assertions throughout the engine.
/// Probabilities are exact; utilities are doubles, so inequalities that are
/// theorems get this much slack and no more.
inline constexpr double kValueTolerance = 1e-9;

/// Argmax snap width: a candidate must beat the incumbent by more than this
/// to displace it. Mathematically equal values can differ by a few ulps
/// between summation routes; snapping keeps "ties break to the lowest index"
/// deterministic whichever route computed the values.
inline constexpr double kArgmaxTolerance = 1e-12;

/// A finite decision problem: an ordered action set and a utility table
/// U(outcome, action), total over the space it is built against.
struct DecisionProblem {
  std::vector<std::string> actions;
  std::vector<std::vector<double>> utility;  // [outcome][action]

  DecisionProblem() = default;
  DecisionProblem(std::vector<std::string> actions_in,
                  std::vector<std::vector<double>> utility_in);

  std::size_t action_count() const { return actions.size(); }
  double u(std::size_t outcome, std::size_t action) const { return utility[outcome][action]; }

  int action_index(const std::string& name) const;
};

/// Builds the forecasting problem with log-score utility: each action is a
/// probability report from `grid`, scored ln(r) when the event occurs and
/// ln(1-r) otherwise. Grid entries are exact rationals in (0,1).
DecisionProblem log_score_problem(const SampleSpace& space, const RandomVariable& event,
                                  const std::vector<Rational>& grid);

/// Action maximizing conditional expected utility, ties broken by lowest
/// action index. Returns (action index, achieved conditional expectation).
/// Throws EvidenceImpossible when the evidence has zero mass.
std::pair<int, double> best_action(const DecisionProblem& problem, const SampleSpace& space,
                                   const Evidence& evidence);

/// Same, conditioning directly on an event mask.
std::pair<int, double> best_action_on(const DecisionProblem& problem, const SampleSpace& space,
                                      OutcomeMask event);

/// Realized value of information: utility of the posterior-best action minus
/// utility of the prior-best action at the true outcome, minus price.
/// Throws InconsistentGoods when the good's realized value contradicts the
/// true outcome.
double realized_voi(const DecisionProblem& problem, const SampleSpace& space,
                    const InfoGood& good, std::size_t true_outcome);

/// Ex-post value: best conditional expected utility given the good's value,
/// minus the prior-best action's conditional expectation, minus price.
double voi_ex_post(const DecisionProblem& problem, const SampleSpace& space,
                   const InfoGood& good);

/// Ex-ante value of an experiment: expectation of voi_ex_post over the
/// variable's values.
double voi_ex_ante(const DecisionProblem& problem, const SampleSpace& space,
                   const RandomVariable& variable, double price);

/// Bundle of the three VOI quantities for one good.
struct VoiReport {
  InfoGood good;
  double realized = 0.0;
  double ex_post = 0.0;
  double ex_ante = 0.0;
  int best_action_prior = -1;
  int best_action_posterior = -1;
};

VoiReport make_voi_report(const DecisionProblem& problem, const SampleSpace& space,
                          const InfoGood& good, std::size_t true_outcome);

/// Result of a randomized verification suite.
struct PropertyReport {
  int trials = 0;
  int violations = 0;
  double min_slack = 0.0;     // smallest slack seen across trials
  std::uint64_t seed = 0;
  std::vector<double> slacks; // per trial, in trial order
};

/// Checks, over seeded random (space, problem, variable) triples, that a
/// Bayesian agent expects to gain from information:
///   E_I[ E[U(argmax E[U|I]) | I] ]  >=  max_a E[U(a)]  - tolerance.
/// Throws ViolationFound with the offending scenario serialized.
PropertyReport verify_gain_from_information(std::uint64_t seed, int trials, int workers = 1);

}  // namespace infoval
