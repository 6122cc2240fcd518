#include "infoval/admissible.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "infoval/errors.hpp"

namespace infoval {

namespace {

// The information a stage-s decision may use: the offer-set prefix class
// below its level, and the goods purchased above it with their revealed
// values. Higher offer-set realizations are forgotten, so contexts from
// different branches merge whenever these agree.
struct Ctx {
  int rep = 0;
  OutcomeMask values = ~OutcomeMask(0);
  std::string suffix;  // purchased goods + values at levels above, content-keyed

  std::string key() const { return "r" + std::to_string(rep) + suffix; }
};

// Content description of the purchased goods of one level and their values
// at an outcome: sorted (variable, price, value) triples, so that branches
// that bought the same information index the same table row.
std::string purchased_desc(const LadderLevel& level, std::uint32_t mask, std::size_t outcome) {
  std::vector<std::string> parts;
  for (std::size_t i = 0; i < level.offers.size(); ++i) {
    if (mask & (1u << i)) {
      const InfoGood& offer = level.offers[i];
      std::ostringstream part;
      part << offer.variable.name() << '@' << offer.price << '='
           << offer.variable.value_at(outcome);
      parts.push_back(part.str());
    }
  }
  std::sort(parts.begin(), parts.end());
  std::string out;
  for (const auto& p : parts) {
    out += p;
    out += ';';
  }
  return out;
}

std::string level_suffix(int level, const LadderLevel& content, std::uint32_t mask,
                         std::size_t outcome) {
  return "#L" + std::to_string(level) + ":" + purchased_desc(content, mask, outcome);
}

}  // namespace

AdmissibleEnumerator::AdmissibleEnumerator(const DecisionProblem& problem,
                                           const SampleSpace& space, const OfferLadder& ladder,
                                           int depth, std::uint64_t protocol_budget)
    : problem_(problem),
      space_(space),
      ladder_(ladder),
      depth_(depth),
      budget_(protocol_budget),
      engine_(problem, space, ladder, depth) {
  if (depth_ < 0 || depth_ > ladder_.depth()) {
    throw std::invalid_argument("depth outside the ladder's level range");
  }
}

namespace {

// Stage-by-stage assignment of choices to contexts. A full assignment of one
// stage derives the next stage's contexts (deduplicated by key). `sink` is
// null for the counting pass.
struct EnumDriver {
  const DecisionProblem& problem;
  const SampleSpace& space;
  const OfferLadder& ladder;
  int depth;
  std::uint64_t budget;
  std::uint64_t count = 0;
  const std::function<void(const AdmissibleProtocol&)>* sink = nullptr;
  AdmissibleProtocol current;

  std::uint32_t choice_count(int stage, const Ctx& ctx) const {
    if (stage == 0) return static_cast<std::uint32_t>(problem.action_count());
    const LadderLevel& level = ladder.variant(ctx.rep).levels[stage - 1];
    return 1u << level.offers.size();
  }

  void derive_children(int stage, const Ctx& ctx, std::uint32_t choice,
                       std::vector<Ctx>& out) const {
    OutcomeMask eff = ctx.values & ladder.prefix_mask(ctx.rep, stage) & space.support();
    const LadderLevel& level = ladder.variant(ctx.rep).levels[stage - 1];
    OutcomeMask pending = eff;
    for (std::size_t w = 0; w < space.size() && pending; ++w) {
      OutcomeMask bit = OutcomeMask(1) << w;
      if (!(pending & bit)) continue;
      OutcomeMask val_event = subset_value_event(level, choice, w);
      pending &= ~(val_event & eff);
      Ctx child;
      child.rep = ladder.prefix_rep(ctx.rep, stage - 1);
      child.values = ctx.values & val_event &
                     ladder.purchase_identity_mask(ctx.rep, stage - 1, choice);
      child.suffix = ctx.suffix + level_suffix(stage - 1, level, choice, w);
      out.push_back(std::move(child));
    }
  }

  void assign(int stage, const std::vector<Ctx>& contexts, std::size_t i,
              std::vector<Ctx>& children_acc) {
    if (i == contexts.size()) {
      if (stage == 0) {
        ++count;
        if (count > budget) {
          throw BudgetExceeded("admissible protocol count exceeds budget", count);
        }
        if (sink) (*sink)(current);
        return;
      }
      std::vector<Ctx> next = children_acc;
      std::sort(next.begin(), next.end(),
                [](const Ctx& a, const Ctx& b) { return a.key() < b.key(); });
      next.erase(std::unique(next.begin(), next.end(),
                             [](const Ctx& a, const Ctx& b) { return a.key() == b.key(); }),
                 next.end());
      std::vector<Ctx> acc;
      assign(stage - 1, next, 0, acc);
      return;
    }
    const Ctx& ctx = contexts[i];
    std::uint32_t n = choice_count(stage, ctx);
    for (std::uint32_t choice = 0; choice < n; ++choice) {
      if (sink) current.tables[stage][ctx.key()] = choice;
      std::size_t mark = children_acc.size();
      if (stage > 0) derive_children(stage, ctx, choice, children_acc);
      assign(stage, contexts, i + 1, children_acc);
      children_acc.resize(mark);
      if (sink) current.tables[stage].erase(ctx.key());
    }
  }

  std::vector<Ctx> root_contexts() const {
    std::vector<Ctx> roots;
    for (int v = 0; v < ladder.variant_count(); ++v) {
      if (ladder.prefix_rep(v, depth) != v) continue;
      OutcomeMask mask = ladder.prefix_mask(v, depth) & space.support();
      if (space.mass_of(mask).is_zero()) continue;
      Ctx ctx;
      ctx.rep = v;
      roots.push_back(std::move(ctx));
    }
    return roots;
  }

  void run() {
    if (sink) current.tables.assign(static_cast<std::size_t>(depth) + 1, {});
    std::vector<Ctx> acc;
    auto roots = root_contexts();
    assign(depth, roots, 0, acc);
  }
};

}  // namespace

std::uint64_t AdmissibleEnumerator::count() {
  EnumDriver driver{problem_, space_, ladder_, depth_, budget_, 0, nullptr, {}};
  driver.run();
  return driver.count;
}

void AdmissibleEnumerator::enumerate(const std::function<void(const AdmissibleProtocol&)>& sink) {
  count();  // dry pass enforces the budget before any table is materialized
  EnumDriver driver{problem_, space_, ladder_, depth_, budget_, 0, nullptr, {}};
  driver.sink = &sink;
  driver.run();
}

PurchasePlan AdmissibleEnumerator::protocol_playout(const AdmissibleProtocol& protocol,
                                                    std::size_t outcome, int interpolate_from) {
  int variant = ladder_.variant_of(outcome);
  const LadderStack& stack = ladder_.stack_for(outcome);
  OutcomeMask values = ~OutcomeMask(0);
  std::string suffix;
  PurchasePlan plan;
  plan.purchases.assign(static_cast<std::size_t>(depth_), 0);
  double inf = std::numeric_limits<double>::infinity();
  for (int stage = depth_; stage >= 1; --stage) {
    std::uint32_t choice;
    if (stage > interpolate_from) {
      std::string key =
          "r" + std::to_string(ladder_.prefix_rep(variant, stage)) + suffix;
      choice = protocol.tables[stage].at(key);
    } else {
      choice = engine_.stage_choice(stage, variant, values, inf);
    }
    const LadderLevel& level = stack.levels[stage - 1];
    plan.purchases[stage - 1] = choice;
    plan.total_price += subset_price(level, choice);
    values &= subset_value_event(level, choice, outcome) &
              ladder_.purchase_identity_mask(variant, stage - 1, choice);
    suffix += level_suffix(stage - 1, level, choice, outcome);
  }
  if (0 > interpolate_from) {
    std::string key = "r" + std::to_string(ladder_.prefix_rep(variant, 0)) + suffix;
    plan.action = static_cast<int>(protocol.tables[0].at(key));
  } else {
    plan.action = static_cast<int>(engine_.stage_choice(0, variant, values, inf));
  }
  return plan;
}

double AdmissibleEnumerator::evaluate(const AdmissibleProtocol& protocol) {
  return evaluate_interpolated(protocol, -1);
}

double AdmissibleEnumerator::evaluate_interpolated(const AdmissibleProtocol& protocol, int n) {
  double total = 0.0;
  for (std::size_t w = 0; w < space_.size(); ++w) {
    if (space_.mass(w).is_zero()) continue;
    PurchasePlan plan = protocol_playout(protocol, w, n);
    total += space_.mass(w).to_double() * (problem_.u(w, plan.action) - plan.total_price);
  }
  return total;
}

bool AdmissibleEnumerator::matches_recursive(const AdmissibleProtocol& protocol) {
  for (std::size_t w = 0; w < space_.size(); ++w) {
    if (space_.mass(w).is_zero()) continue;
    if (protocol_playout(protocol, w, -1) != engine_.playout(w)) return false;
  }
  return true;
}

SuperiorityReport verify_exante_superiority(const DecisionProblem& problem,
                                            const SampleSpace& space, const OfferLadder& ladder,
                                            int depth, std::uint64_t protocol_budget,
                                            double tolerance) {
  AdmissibleEnumerator enumerator(problem, space, ladder, depth, protocol_budget);
  SuperiorityReport report;
  report.recursive_value = recursive_exante_value(problem, space, ladder, depth);
  report.min_margin = std::numeric_limits<double>::infinity();
  report.min_chain_slack = std::numeric_limits<double>::infinity();
  report.best_admissible_value = -std::numeric_limits<double>::infinity();
  enumerator.enumerate([&](const AdmissibleProtocol& protocol) {
    ++report.protocols;
    double value = enumerator.evaluate_interpolated(protocol, -1);
    double prev = value;
    for (int n = 0; n <= depth; ++n) {
      double next = enumerator.evaluate_interpolated(protocol, n);
      report.min_chain_slack = std::min(report.min_chain_slack, next - prev);
      if (next < prev - tolerance) ++report.violations;
      prev = next;
    }
    report.best_admissible_value = std::max(report.best_admissible_value, value);
    report.min_margin = std::min(report.min_margin, report.recursive_value - value);
    if (value > report.recursive_value + tolerance) ++report.violations;
    if (!report.recursive_included && enumerator.matches_recursive(protocol)) {
      report.recursive_included = true;
    }
  });
  if (!report.recursive_included) ++report.violations;
  return report;
}

}  // namespace infoval
