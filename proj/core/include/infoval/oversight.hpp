#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "infoval/decision.hpp"

namespace infoval {

/// A playable disclosure: a coarsening of the knowledge variable with a
/// price. Compound moves are joins of base moves with summed prices, so the
/// playable set is closed under combination and prices are additive.
struct OversightMove {
  std::string name;
  RandomVariable variable;
  double price = 0.0;
  std::uint32_t components = 0;  // bitmask over the instance's base moves
};

/// The oversight game: a sequence of fully informed provers each reveal one
/// move (or decline), and each is rewarded afterwards with the conditional
/// expectation, under everything revealed, of the improvement its disclosure
/// made to the evaluator's interim decision, net of its price.
class OversightInstance {
 public:
  OversightInstance(SampleSpace space, DecisionProblem problem, RandomVariable knowledge,
                    int true_outcome,
                    std::vector<std::pair<RandomVariable, double>> base_moves,
                    int depth_cap = 16, std::uint64_t history_budget = 200'000);

  const SampleSpace& space() const { return space_; }
  const DecisionProblem& problem() const { return problem_; }
  const RandomVariable& knowledge() const { return knowledge_; }
  int true_outcome() const { return true_outcome_; }
  int depth_cap() const { return depth_cap_; }
  std::uint64_t history_budget() const { return history_budget_; }

  /// All playable non-null moves: joins of nonempty base-move subsets,
  /// ordered by (component count, component mask).
  const std::vector<OversightMove>& moves() const { return moves_; }
  std::size_t base_move_count() const { return base_count_; }

  int move_index(const std::string& name) const;

  /// Event of a move's true value intersected with the support.
  OutcomeMask move_event(int move) const { return move_events_[move]; }
  OutcomeMask initial_event() const { return initial_event_; }

 private:
  SampleSpace space_;
  DecisionProblem problem_;
  RandomVariable knowledge_;
  int true_outcome_;
  int depth_cap_;
  std::uint64_t history_budget_;
  std::size_t base_count_;
  std::vector<OversightMove> moves_;
  std::vector<OutcomeMask> move_events_;
  OutcomeMask initial_event_;
};

/// A played sequence of moves; -1 entries are the null move.
struct MoveHistory {
  std::vector<int> moves;

  friend bool operator==(const MoveHistory&, const MoveHistory&) = default;
};

/// The evaluator's interim bookkeeping over one terminal history: interim
/// actions, conditional marginal values, and rewards.
struct RewardLedger {
  std::vector<int> interim_actions;     // one more entry than moves
  std::vector<double> marginal_values;  // E[U(a_n) - U(a_{n-1}) | everything] per move
  std::vector<double> rewards;          // marginal value net of price; null moves get 0
};

/// Per-stage strategy as a lookup table over reachable histories. Keys are
/// ">"-joined move names ("" is the root); values are move names, "0" for
/// the null move.
struct StrategyProfile {
  std::map<std::string, std::string> choices;
};

struct SpeSolution {
  StrategyProfile profile;
  MoveHistory path;  // equilibrium moves up to (excluding) the terminating null
  RewardLedger ledger;
};

/// The evaluator's action after the first n moves of the history.
int interim_action(const OversightInstance& instance, const MoveHistory& history, int n);

/// Ledger for a given terminal history (not necessarily the equilibrium one).
RewardLedger rewards(const OversightInstance& instance, const MoveHistory& history);

/// Whether `candidate` extends the history: it strictly refines the revealed
/// evidence and its conditional expected marginal value, net of price, is
/// positive (beyond the argmax tie width) given the history plus its own
/// value. The threshold matches equilibrium play, which prefers the null
/// move on ties: a move of exactly zero value never gets played, so it does
/// not threaten anyone.
bool extends(const OversightInstance& instance, int candidate, const MoveHistory& history);

/// The alternating-quantifier condition: every extension of the history can
/// be met by some counter-extension leading to an inextensible position.
bool inextensible(const OversightInstance& instance, const MoveHistory& history);

/// Backward induction over the finite history tree. Each mover maximizes its
/// own final reward given equilibrium continuations; ties prefer the null
/// move, then the lowest move index. Throws BudgetExceeded when the
/// reachable-history count is over the instance's budget.
SpeSolution solve_spe(const OversightInstance& instance);

/// Conditional marginal value of a move played first, E[U^1(m) | m], i.e.
/// its reward when nothing follows it.
double first_move_value(const OversightInstance& instance, int move);

/// The three equilibrium-characterization checks for one instance.
struct CharacterizationReport {
  bool first_inextensible = false;
  bool later_all_null = false;
  bool max_expost_among_inextensible = false;
  int first_move = -1;  // -1 when the equilibrium reveals nothing
  double first_move_value = 0.0;
  std::string detail;

  bool passed() const {
    return first_inextensible && later_all_null && max_expost_among_inextensible;
  }
};

CharacterizationReport verify_equilibrium_characterization(const OversightInstance& instance,
                                                           double tolerance = kValueTolerance);

}  // namespace infoval
