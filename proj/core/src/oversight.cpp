#include "infoval/oversight.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <sstream>
#include <stdexcept>

#include "infoval/errors.hpp"

namespace infoval {

OversightInstance::OversightInstance(SampleSpace space, DecisionProblem problem,
                                     RandomVariable knowledge, int true_outcome,
                                     std::vector<std::pair<RandomVariable, double>> base_moves,
                                     int depth_cap, std::uint64_t history_budget)
    : space_(std::move(space)),
      problem_(std::move(problem)),
      knowledge_(std::move(knowledge)),
      true_outcome_(true_outcome),
      depth_cap_(depth_cap),
      history_budget_(history_budget),
      base_count_(base_moves.size()) {
  if (true_outcome_ < 0 || static_cast<std::size_t>(true_outcome_) >= space_.size()) {
    throw std::invalid_argument("true outcome index out of range");
  }
  if (space_.mass(true_outcome_).is_zero()) {
    throw std::invalid_argument("true outcome has zero prior mass");
  }
  if (base_moves.size() > 8) {
    throw std::invalid_argument("move universe capped at 8 base moves");
  }
  for (const auto& [variable, price] : base_moves) {
    if (price < 0.0) throw std::invalid_argument("negative move price");
    if (!variable.coarsens(knowledge_)) {
      throw std::invalid_argument("move '" + variable.name() +
                                  "' does not coarsen the knowledge variable");
    }
  }
  initial_event_ = space_.support();

  // Join-closure: every nonempty subset of the base moves is playable, with
  // the summed price. Ordered singletons first, then by component mask.
  std::uint32_t n_subsets = 1u << base_moves.size();
  std::vector<std::uint32_t> order;
  for (std::uint32_t m = 1; m < n_subsets; ++m) order.push_back(m);
  std::sort(order.begin(), order.end(), [](std::uint32_t a, std::uint32_t b) {
    int pa = std::popcount(a);
    int pb = std::popcount(b);
    return pa != pb ? pa < pb : a < b;
  });
  for (std::uint32_t mask : order) {
    std::vector<RandomVariable> members;
    std::string name;
    double price = 0.0;
    for (std::size_t i = 0; i < base_moves.size(); ++i) {
      if (mask & (1u << i)) {
        members.push_back(base_moves[i].first);
        if (!name.empty()) name += "+";
        name += base_moves[i].first.name();
        price += base_moves[i].second;
      }
    }
    OversightMove move;
    move.components = mask;
    move.price = price;
    move.name = name;
    move.variable = members.size() == 1 ? members.front() : join_variables(members, name);
    moves_.push_back(std::move(move));
  }
  move_events_.reserve(moves_.size());
  for (const auto& move : moves_) {
    const std::string value = move.variable.value_at(true_outcome_);
    move_events_.push_back(move.variable.event(value) & initial_event_);
  }
}

int OversightInstance::move_index(const std::string& name) const {
  for (std::size_t i = 0; i < moves_.size(); ++i) {
    if (moves_[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

namespace {

OutcomeMask history_event(const OversightInstance& instance, const MoveHistory& history,
                          int upto) {
  OutcomeMask ev = instance.initial_event();
  for (int i = 0; i < upto; ++i) {
    int m = history.moves[i];
    if (m >= 0) ev &= instance.move_event(m);
  }
  return ev;
}

int best_on(const OversightInstance& instance, OutcomeMask ev) {
  return best_action_on(instance.problem(), instance.space(), ev).first;
}

double conditional_action_gain(const OversightInstance& instance, int action_after,
                               int action_before, OutcomeMask conditioning) {
  SampleSpace posterior = instance.space().conditioned_on(conditioning);
  double total = 0.0;
  for (std::size_t w = 0; w < posterior.size(); ++w) {
    if (posterior.mass(w).is_zero()) continue;
    total += posterior.mass(w).to_double() *
             (instance.problem().u(w, action_after) - instance.problem().u(w, action_before));
  }
  return total;
}

}  // namespace

int interim_action(const OversightInstance& instance, const MoveHistory& history, int n) {
  if (n < 0 || n > static_cast<int>(history.moves.size())) {
    throw std::invalid_argument("interim index outside the history");
  }
  return best_on(instance, history_event(instance, history, n));
}

RewardLedger rewards(const OversightInstance& instance, const MoveHistory& history) {
  int n_moves = static_cast<int>(history.moves.size());
  OutcomeMask terminal = history_event(instance, history, n_moves);
  RewardLedger ledger;
  OutcomeMask ev = instance.initial_event();
  int prev_action = best_on(instance, ev);
  ledger.interim_actions.push_back(prev_action);
  for (int i = 0; i < n_moves; ++i) {
    int m = history.moves[i];
    if (m < 0) {
      // Null move: no new information, no price, reward exactly zero.
      ledger.interim_actions.push_back(prev_action);
      ledger.marginal_values.push_back(0.0);
      ledger.rewards.push_back(0.0);
      continue;
    }
    OutcomeMask next_ev = ev & instance.move_event(m);
    if (next_ev == ev) {
      throw std::invalid_argument("history move '" + instance.moves()[m].name +
                                  "' does not strictly refine the revealed evidence");
    }
    int action = best_on(instance, next_ev);
    double gain = conditional_action_gain(instance, action, prev_action, terminal);
    ledger.interim_actions.push_back(action);
    ledger.marginal_values.push_back(gain);
    ledger.rewards.push_back(gain - instance.moves()[m].price);
    ev = next_ev;
    prev_action = action;
  }
  return ledger;
}

bool extends(const OversightInstance& instance, int candidate, const MoveHistory& history) {
  if (candidate < 0) return false;  // the null move contributes nothing
  OutcomeMask ev = history_event(instance, history, static_cast<int>(history.moves.size()));
  OutcomeMask next_ev = ev & instance.move_event(candidate);
  if (next_ev == ev) return false;  // non-refining moves are not extensions
  int before = best_on(instance, ev);
  int after = best_on(instance, next_ev);
  double value = conditional_action_gain(instance, after, before, next_ev) -
                 instance.moves()[candidate].price;
  // Profitable beyond the tie width. Equilibrium play prefers the null move
  // on ties, so a weak (>= 0) threshold would count moves that are never
  // played; free moves that leave the interim action unchanged have exactly
  // zero value, making that mismatch the rule rather than the exception.
  return value > kArgmaxTolerance;
}

namespace {

// The alternating recursion is a function of the revealed evidence alone, so
// it is memoized on the event mask. Extensions strictly shrink the event,
// which bounds the recursion depth.
struct InextensibleSolver {
  const OversightInstance& instance;
  std::map<OutcomeMask, bool> memo;

  std::vector<int> extensions(OutcomeMask ev) {
    std::vector<int> out;
    int before = best_on(instance, ev);
    for (std::size_t m = 0; m < instance.moves().size(); ++m) {
      OutcomeMask next_ev = ev & instance.move_event(m);
      if (next_ev == ev) continue;
      int after = best_on(instance, next_ev);
      double value = conditional_action_gain(instance, after, before, next_ev) -
                     instance.moves()[m].price;
      if (value > kArgmaxTolerance) out.push_back(static_cast<int>(m));
    }
    return out;
  }

  bool solve(OutcomeMask ev) {
    auto it = memo.find(ev);
    if (it != memo.end()) return it->second;
    bool result = true;
    for (int y : extensions(ev)) {
      OutcomeMask ev_y = ev & instance.move_event(y);
      bool countered = false;
      for (int z : extensions(ev_y)) {
        if (solve(ev_y & instance.move_event(z))) {
          countered = true;
          break;
        }
      }
      if (!countered) {
        result = false;
        break;
      }
    }
    memo.emplace(ev, result);
    return result;
  }
};

}  // namespace

bool inextensible(const OversightInstance& instance, const MoveHistory& history) {
  InextensibleSolver solver{instance, {}};
  return solver.solve(history_event(instance, history, static_cast<int>(history.moves.size())));
}

namespace {

struct SpeSolver {
  const OversightInstance& instance;

  struct Node {
    int move = -1;               // equilibrium move at this evidence; -1 is null
    OutcomeMask terminal = 0;    // evidence at the end of equilibrium play
  };
  std::map<std::pair<OutcomeMask, int>, Node> memo;

  const Node& solve(OutcomeMask ev, int depth_left) {
    auto key = std::make_pair(ev, depth_left);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    Node node;
    node.terminal = ev;
    if (depth_left > 0) {
      int before = best_on(instance, ev);
      double best_reward = 0.0;  // the null move's payoff
      for (std::size_t m = 0; m < instance.moves().size(); ++m) {
        OutcomeMask next_ev = ev & instance.move_event(m);
        if (next_ev == ev) continue;
        const Node& cont = solve(next_ev, depth_left - 1);
        int after = best_on(instance, next_ev);
        double reward = conditional_action_gain(instance, after, before, cont.terminal) -
                        instance.moves()[m].price;
        if (reward > best_reward + kArgmaxTolerance) {
          best_reward = reward;
          node.move = static_cast<int>(m);
          node.terminal = cont.terminal;
        }
      }
    }
    return memo.emplace(key, node).first->second;
  }

  std::uint64_t count_histories(OutcomeMask ev, int depth_left, std::uint64_t budget,
                                std::uint64_t acc) const {
    if (depth_left == 0) return acc;
    for (std::size_t m = 0; m < instance.moves().size(); ++m) {
      OutcomeMask next_ev = ev & instance.move_event(m);
      if (next_ev == ev) continue;
      ++acc;
      if (acc > budget) {
        throw BudgetExceeded("reachable oversight histories exceed budget", acc);
      }
      acc = count_histories(next_ev, depth_left - 1, budget, acc);
    }
    return acc;
  }

  void build_profile(OutcomeMask ev, int depth_left, const std::string& key,
                     StrategyProfile& profile) {
    const Node& node = solve(ev, depth_left);
    profile.choices[key] = node.move < 0 ? "0" : instance.moves()[node.move].name;
    if (depth_left == 0) return;
    for (std::size_t m = 0; m < instance.moves().size(); ++m) {
      OutcomeMask next_ev = ev & instance.move_event(m);
      if (next_ev == ev) continue;
      std::string child = key.empty() ? instance.moves()[m].name
                                      : key + ">" + instance.moves()[m].name;
      build_profile(next_ev, depth_left - 1, child, profile);
    }
  }
};

}  // namespace

SpeSolution solve_spe(const OversightInstance& instance) {
  SpeSolver solver{instance, {}};
  solver.count_histories(instance.initial_event(), instance.depth_cap(),
                         instance.history_budget(), 0);
  SpeSolution solution;
  OutcomeMask ev = instance.initial_event();
  int depth_left = instance.depth_cap();
  while (depth_left > 0) {
    const auto& node = solver.solve(ev, depth_left);
    if (node.move < 0) break;
    solution.path.moves.push_back(node.move);
    ev &= instance.move_event(node.move);
    --depth_left;
  }
  solver.build_profile(instance.initial_event(), instance.depth_cap(), "", solution.profile);
  solution.ledger = rewards(instance, solution.path);
  return solution;
}

double first_move_value(const OversightInstance& instance, int move) {
  if (move < 0) return 0.0;
  OutcomeMask ev = instance.initial_event();
  OutcomeMask next_ev = ev & instance.move_event(move);
  if (next_ev == ev) return -instance.moves()[move].price;
  int before = best_on(instance, ev);
  int after = best_on(instance, next_ev);
  return conditional_action_gain(instance, after, before, next_ev) -
         instance.moves()[move].price;
}

CharacterizationReport verify_equilibrium_characterization(const OversightInstance& instance,
                                                           double tolerance) {
  SpeSolution solution = solve_spe(instance);
  CharacterizationReport report;
  std::ostringstream detail;

  MoveHistory first_history;
  if (!solution.path.moves.empty()) {
    report.first_move = solution.path.moves.front();
    first_history.moves.push_back(report.first_move);
  }
  report.first_inextensible = inextensible(instance, first_history);
  if (!report.first_inextensible) {
    detail << "first equilibrium move is extensible; ";
  }

  report.later_all_null = solution.path.moves.size() <= 1;
  if (!report.later_all_null) {
    detail << "equilibrium path has " << solution.path.moves.size() << " non-null moves; ";
  }

  report.first_move_value = first_move_value(instance, report.first_move);
  report.max_expost_among_inextensible = true;
  for (std::size_t m = 0; m < instance.moves().size(); ++m) {
    MoveHistory h;
    h.moves.push_back(static_cast<int>(m));
    OutcomeMask ev = instance.initial_event() & instance.move_event(m);
    if (ev == instance.initial_event()) continue;  // not playable first
    if (!inextensible(instance, h)) continue;
    double value = first_move_value(instance, static_cast<int>(m));
    if (value > report.first_move_value + tolerance) {
      report.max_expost_among_inextensible = false;
      detail << "inextensible move '" << instance.moves()[m].name << "' has value " << value
             << " > equilibrium " << report.first_move_value << "; ";
    }
  }
  report.detail = detail.str();
  return report;
}

}  // namespace infoval
