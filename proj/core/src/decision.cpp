#include "infoval/decision.hpp"

#include <cmath>
#include <stdexcept>

#include "infoval/errors.hpp"

namespace infoval {

DecisionProblem::DecisionProblem(std::vector<std::string> actions_in,
                                 std::vector<std::vector<double>> utility_in)
    : actions(std::move(actions_in)), utility(std::move(utility_in)) {
  if (actions.empty()) throw std::invalid_argument("decision problem needs at least one action");
  for (const auto& row : utility) {
    if (row.size() != actions.size()) {
      throw std::invalid_argument("utility row width does not match action count");
    }
    for (double u : row) {
      if (!std::isfinite(u)) throw std::invalid_argument("non-finite utility entry");
    }
  }
}

int DecisionProblem::action_index(const std::string& name) const {
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (actions[i] == name) return static_cast<int>(i);
  }
  return -1;
}

DecisionProblem log_score_problem(const SampleSpace& space, const RandomVariable& event,
                                  const std::vector<Rational>& grid) {
  if (event.domain_size() != space.size()) {
    throw std::invalid_argument("event variable lives on a different space");
  }
  std::vector<std::string> actions;
  std::vector<double> reports;
  for (const auto& r : grid) {
    if (!(Rational(0) < r) || !(r < Rational(1))) {
      throw std::invalid_argument("log-score grid entry " + r.str() + " outside (0,1)");
    }
    actions.push_back(r.str());
    reports.push_back(r.to_double());
  }
  if (actions.empty()) throw std::invalid_argument("empty log-score grid");
  std::vector<std::vector<double>> utility(space.size(), std::vector<double>(actions.size()));
  for (std::size_t w = 0; w < space.size(); ++w) {
    bool occurs = event.value_at(w) == "1";
    for (std::size_t a = 0; a < actions.size(); ++a) {
      utility[w][a] = occurs ? std::log(reports[a]) : std::log1p(-reports[a]);
    }
  }
  return DecisionProblem(std::move(actions), std::move(utility));
}

std::pair<int, double> best_action_on(const DecisionProblem& problem, const SampleSpace& space,
                                      OutcomeMask event) {
  SampleSpace posterior = space.conditioned_on(event);
  int best = 0;
  double best_value = 0.0;
  for (std::size_t a = 0; a < problem.action_count(); ++a) {
    double v = 0.0;
    for (std::size_t w = 0; w < posterior.size(); ++w) {
      if (!posterior.mass(w).is_zero()) v += posterior.mass(w).to_double() * problem.u(w, a);
    }
    if (a == 0 || v > best_value + kArgmaxTolerance) {
      best = static_cast<int>(a);
      best_value = v;
    }
  }
  return {best, best_value};
}

std::pair<int, double> best_action(const DecisionProblem& problem, const SampleSpace& space,
                                   const Evidence& evidence) {
  return best_action_on(problem, space, evidence.event(space));
}

double realized_voi(const DecisionProblem& problem, const SampleSpace& space,
                    const InfoGood& good, std::size_t true_outcome) {
  if (good.variable.value_at(true_outcome) != good.realized_value) {
    throw InconsistentGoods("good '" + good.variable.name() +
                            "' realized value contradicts the true outcome");
  }
  auto [prior_act, prior_val] = best_action_on(problem, space, space.support());
  auto [post_act, post_val] = best_action_on(problem, space, good.event());
  (void)prior_val;
  (void)post_val;
  return problem.u(true_outcome, post_act) - problem.u(true_outcome, prior_act) - good.price;
}

double voi_ex_post(const DecisionProblem& problem, const SampleSpace& space,
                   const InfoGood& good) {
  OutcomeMask event = good.event();
  SampleSpace posterior = space.conditioned_on(event);
  auto [prior_act, prior_val] = best_action_on(problem, space, space.support());
  (void)prior_val;
  auto [post_act, post_val] = best_action_on(problem, space, event);
  double prior_act_cond = 0.0;
  for (std::size_t w = 0; w < posterior.size(); ++w) {
    if (!posterior.mass(w).is_zero()) {
      prior_act_cond += posterior.mass(w).to_double() * problem.u(w, prior_act);
    }
  }
  (void)post_act;
  return post_val - prior_act_cond - good.price;
}

double voi_ex_ante(const DecisionProblem& problem, const SampleSpace& space,
                   const RandomVariable& variable, double price) {
  double total = 0.0;
  for (const auto& value : variable.range()) {
    Rational mass = space.mass_of(variable.event(value) & space.support());
    if (mass.is_zero()) continue;
    total += mass.to_double() * voi_ex_post(problem, space, InfoGood{variable, value, price});
  }
  return total;
}

VoiReport make_voi_report(const DecisionProblem& problem, const SampleSpace& space,
                          const InfoGood& good, std::size_t true_outcome) {
  VoiReport report;
  report.good = good;
  report.realized = realized_voi(problem, space, good, true_outcome);
  report.ex_post = voi_ex_post(problem, space, good);
  report.ex_ante = voi_ex_ante(problem, space, good.variable, good.price);
  report.best_action_prior = best_action_on(problem, space, space.support()).first;
  report.best_action_posterior = best_action_on(problem, space, good.event()).first;
  return report;
}

}  // namespace infoval
