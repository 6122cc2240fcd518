#include "infoval/inspect.hpp"

#include <bit>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "infoval/errors.hpp"

namespace infoval {

namespace {

constexpr double kBudgetEps = 1e-9;

struct MemoKey {
  std::uint64_t stage_rep;
  std::uint64_t values;
  std::uint64_t budget_bits;
  friend bool operator==(const MemoKey&, const MemoKey&) = default;
};

struct MemoKeyHash {
  std::size_t operator()(const MemoKey& k) const {
    std::uint64_t h = k.stage_rep * 0x9e3779b97f4a7c15ULL;
    h ^= k.values + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= k.budget_bits + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

}  // namespace

struct RecursiveEngine::Impl {
  struct Entry {
    double value;
    std::uint32_t choice;
  };
  std::unordered_map<MemoKey, Entry, MemoKeyHash> memo;

  static MemoKey key_of(int stage, int rep, OutcomeMask values_event, bool budget_active,
                        double budget_left) {
    std::uint64_t budget_bits =
        budget_active ? std::bit_cast<std::uint64_t>(budget_left) : 0;
    return MemoKey{(std::uint64_t(stage) << 32) | std::uint32_t(rep), values_event,
                   budget_bits};
  }
};

RecursiveEngine::RecursiveEngine(const DecisionProblem& problem, const SampleSpace& space,
                                 const OfferLadder& ladder, int depth,
                                 std::optional<double> budget, OutcomeMask base_evidence)
    : problem_(problem),
      space_(space),
      ladder_(ladder),
      depth_(depth),
      budget_(budget.value_or(std::numeric_limits<double>::infinity())),
      budget_active_(budget.has_value()),
      base_(base_evidence),
      impl_(std::make_unique<Impl>()) {
  if (depth_ < 0 || depth_ > ladder_.depth()) {
    throw std::invalid_argument("depth outside the ladder's level range");
  }
  if (ladder_.outcome_count() != space_.size()) {
    throw std::invalid_argument("ladder built for a different space");
  }
}

RecursiveEngine::~RecursiveEngine() = default;

const void* RecursiveEngine::solve_stage(int stage, int variant, OutcomeMask values_event,
                                         double budget_left) {
  int rep = ladder_.prefix_rep(variant, stage);
  MemoKey key = Impl::key_of(stage, rep, values_event, budget_active_, budget_left);
  auto it = impl_->memo.find(key);
  if (it != impl_->memo.end()) return &it->second;

  OutcomeMask eff = values_event & ladder_.prefix_mask(variant, stage) & base_;
  Impl::Entry entry{0.0, 0};
  if (stage == 0) {
    auto [act, val] = best_action_on(problem_, space_, eff);
    entry.value = val;
    entry.choice = static_cast<std::uint32_t>(act);
  } else {
    const LadderLevel& level = ladder_.variant(rep).levels[stage - 1];
    Rational eff_mass = space_.mass_of(eff);
    if (eff_mass.is_zero()) throw EvidenceImpossible("zero-mass evidence in stage value");
    std::uint32_t n_subsets = 1u << level.offers.size();
    bool have = false;
    for (std::uint32_t mask = 0; mask < n_subsets; ++mask) {
      double price = subset_price(level, mask);
      if (budget_active_ && price > budget_left + kBudgetEps) continue;
      double value = -price;
      OutcomeMask pending = eff;
      for (std::size_t w = 0; w < space_.size() && pending; ++w) {
        OutcomeMask bit = OutcomeMask(1) << w;
        if (!(pending & bit)) continue;
        if (space_.mass(w).is_zero()) {
          pending &= ~bit;
          continue;
        }
        OutcomeMask val_event = subset_value_event(level, mask, w);
        OutcomeMask group = eff & val_event;
        pending &= ~(val_event & eff);
        double p = (space_.mass_of(group) / eff_mass).to_double();
        OutcomeMask held = val_event & ladder_.purchase_identity_mask(rep, stage - 1, mask);
        double child =
            stage_value(stage - 1, variant, values_event & held, budget_left - price);
        value += p * child;
      }
      if (!have || value > entry.value + kArgmaxTolerance) {
        entry.value = value;
        entry.choice = mask;
        have = true;
      }
    }
    if (!have) {
      // The empty subset is free, so something is always affordable.
      throw std::logic_error("no affordable subset at stage " + std::to_string(stage));
    }
  }
  auto [pos, inserted] = impl_->memo.emplace(key, entry);
  (void)inserted;
  return &pos->second;
}

double RecursiveEngine::stage_value(int stage, int variant, OutcomeMask values_event,
                                    double budget_left) {
  return static_cast<const Impl::Entry*>(
             solve_stage(stage, variant, values_event, budget_left))
      ->value;
}

std::uint32_t RecursiveEngine::stage_choice(int stage, int variant, OutcomeMask values_event,
                                            double budget_left) {
  return static_cast<const Impl::Entry*>(
             solve_stage(stage, variant, values_event, budget_left))
      ->choice;
}

PurchasePlan RecursiveEngine::playout(std::size_t outcome) {
  int variant = ladder_.variant_of(outcome);
  OutcomeMask values = ~OutcomeMask(0);
  double budget_left = budget_;
  PurchasePlan plan;
  plan.purchases.assign(static_cast<std::size_t>(depth_), 0);
  for (int stage = depth_; stage >= 1; --stage) {
    std::uint32_t mask = stage_choice(stage, variant, values, budget_left);
    const LadderLevel& level = ladder_.stack_for(outcome).levels[stage - 1];
    double price = subset_price(level, mask);
    values &= subset_value_event(level, mask, outcome) &
              ladder_.purchase_identity_mask(variant, stage - 1, mask);
    budget_left -= price;
    plan.total_price += price;
    plan.purchases[stage - 1] = mask;
  }
  plan.action = static_cast<int>(stage_choice(0, variant, values, budget_left));
  return plan;
}

double RecursiveEngine::exante_value() {
  double total = 0.0;
  for (std::size_t w = 0; w < space_.size(); ++w) {
    if (space_.mass(w).is_zero()) continue;
    PurchasePlan plan = playout(w);
    total += space_.mass(w).to_double() * (problem_.u(w, plan.action) - plan.total_price);
  }
  return total;
}

PurchasePlan solve_recursive(const DecisionProblem& problem, const SampleSpace& space,
                             const OfferLadder& ladder, int depth, std::size_t true_outcome,
                             std::optional<double> budget, OutcomeMask base_evidence) {
  if (space.mass(true_outcome).is_zero()) {
    throw std::invalid_argument("true outcome has zero prior mass");
  }
  RecursiveEngine engine(problem, space, ladder, depth, budget, base_evidence);
  return engine.playout(true_outcome);
}

// ---------------------------------------------------------------------------
// Successive protocol: levelwise recursion. The instrumental value of a
// bundle is defined against decisions that consult only the bundle's own
// information, so deeper knowledge cannot flow past one level.
// ---------------------------------------------------------------------------

namespace {

class SuccessiveEngine {
 public:
  SuccessiveEngine(const DecisionProblem& problem, const SampleSpace& space,
                   const OfferLadder& ladder, int depth)
      : problem_(problem), space_(space), stack_(ladder.variant(0)), depth_(depth) {
    if (ladder.is_generative()) {
      throw std::invalid_argument("successive protocol requires fixed-offers mode");
    }
    if (depth_ < 0 || depth_ > ladder.depth()) {
      throw std::invalid_argument("depth outside the ladder's level range");
    }
    full_ = space_.size() >= kMaxOutcomes ? ~OutcomeMask(0)
                                          : (OutcomeMask(1) << space_.size()) - 1;
  }

  // Candidate count at level m: actions at 0, subsets of level m-1 above.
  std::uint32_t candidate_count(int m) const {
    if (m == 0) return static_cast<std::uint32_t>(problem_.action_count());
    return 1u << stack_.levels[m - 1].offers.size();
  }

  double level_value(int m, std::uint32_t x, std::size_t w) {
    if (m == 0) return problem_.u(w, x);
    auto key = std::tuple(m, x, w);
    auto it = value_memo_.find(key);
    if (it != value_memo_.end()) return it->second;
    const LadderLevel& level = stack_.levels[m - 1];
    OutcomeMask cond = subset_value_event(level, x, w);
    double price = subset_price(level, x);
    std::uint32_t a_post = level_argmax(m - 1, cond & full_);
    std::uint32_t a_prior = level_argmax(m - 1, full_);
    double v = level_value(m - 1, a_post, w) - level_value(m - 1, a_prior, w) - price;
    value_memo_.emplace(key, v);
    return v;
  }

  double level_expect(int m, std::uint32_t x, OutcomeMask cond) {
    auto key = std::tuple(m, x, cond);
    auto it = expect_memo_.find(key);
    if (it != expect_memo_.end()) return it->second;
    Rational mass = space_.mass_of(cond);
    if (mass.is_zero()) throw EvidenceImpossible("zero-mass conditioning in successive value");
    double total = 0.0;
    for (std::size_t w = 0; w < space_.size(); ++w) {
      if (!(cond & (OutcomeMask(1) << w)) || space_.mass(w).is_zero()) continue;
      total += (space_.mass(w) / mass).to_double() * level_value(m, x, w);
    }
    expect_memo_.emplace(key, total);
    return total;
  }

  std::uint32_t level_argmax(int m, OutcomeMask cond) {
    auto key = std::tuple(m, cond);
    auto it = argmax_memo_.find(key);
    if (it != argmax_memo_.end()) return it->second;
    std::uint32_t best = 0;
    double best_value = 0.0;
    for (std::uint32_t x = 0; x < candidate_count(m); ++x) {
      double v = level_expect(m, x, cond);
      if (x == 0 || v > best_value + kArgmaxTolerance) {
        best = x;
        best_value = v;
      }
    }
    argmax_memo_.emplace(key, best);
    return best;
  }

  PurchasePlan solve(std::size_t true_outcome) {
    PurchasePlan plan;
    plan.purchases.assign(static_cast<std::size_t>(depth_), 0);
    OutcomeMask cond = full_;
    for (int n = depth_; n >= 1; --n) {
      std::uint32_t x = level_argmax(n, cond);
      plan.purchases[n - 1] = x;
      plan.total_price += subset_price(stack_.levels[n - 1], x);
      cond = subset_value_event(stack_.levels[n - 1], x, true_outcome) & full_;
    }
    plan.action = static_cast<int>(level_argmax(0, cond));
    return plan;
  }

  std::vector<double> gains() {
    std::vector<double> out(static_cast<std::size_t>(depth_), 0.0);
    for (std::size_t w = 0; w < space_.size(); ++w) {
      if (space_.mass(w).is_zero()) continue;
      double p = space_.mass(w).to_double();
      OutcomeMask cond = full_;
      for (int n = depth_; n >= 1; --n) {
        std::uint32_t x = level_argmax(n, cond);
        out[n - 1] += p * level_value(n, x, w);
        cond = subset_value_event(stack_.levels[n - 1], x, w) & full_;
      }
    }
    return out;
  }

 private:
  const DecisionProblem& problem_;
  const SampleSpace& space_;
  const LadderStack& stack_;
  int depth_;
  OutcomeMask full_;
  std::map<std::tuple<int, std::uint32_t, std::size_t>, double> value_memo_;
  std::map<std::tuple<int, std::uint32_t, OutcomeMask>, double> expect_memo_;
  std::map<std::tuple<int, OutcomeMask>, std::uint32_t> argmax_memo_;
};

}  // namespace

PurchasePlan solve_successive(const DecisionProblem& problem, const SampleSpace& space,
                              const OfferLadder& ladder, int depth, std::size_t true_outcome) {
  if (space.mass(true_outcome).is_zero()) {
    throw std::invalid_argument("true outcome has zero prior mass");
  }
  SuccessiveEngine engine(problem, space, ladder, depth);
  return engine.solve(true_outcome);
}

double successive_level_utility(const DecisionProblem& problem, const SampleSpace& space,
                                const OfferLadder& ladder, int level, std::uint32_t choice,
                                std::size_t outcome) {
  if (level < 0 || level > ladder.depth()) {
    throw std::invalid_argument("level outside the ladder's range");
  }
  SuccessiveEngine engine(problem, space, ladder, ladder.depth());
  if (choice >= engine.candidate_count(level)) {
    throw std::invalid_argument("choice outside the level's candidate set");
  }
  return engine.level_value(level, choice, outcome);
}

std::vector<double> successive_level_gains(const DecisionProblem& problem,
                                           const SampleSpace& space, const OfferLadder& ladder,
                                           int depth) {
  SuccessiveEngine engine(problem, space, ladder, depth);
  return engine.gains();
}

double node_value(const DecisionProblem& problem, const SampleSpace& space,
                  const OfferLadder& ladder, int depth,
                  const std::vector<std::uint32_t>& suffix_masks, int action,
                  std::size_t true_outcome) {
  int m = static_cast<int>(suffix_masks.size());
  if (m > depth) throw std::invalid_argument("suffix longer than the ladder depth");
  if (action >= 0 && m != depth) {
    throw std::invalid_argument("an explicit base action needs a full suffix");
  }
  const LadderStack& stack = ladder.stack_for(true_outcome);
  int start = depth - m;  // next stage to decide
  OutcomeMask values = ~OutcomeMask(0);
  double prices = 0.0;
  int variant = ladder.variant_of(true_outcome);
  for (int j = 0; j < m; ++j) {
    const LadderLevel& level = stack.levels[start + j];
    values &= subset_value_event(level, suffix_masks[j], true_outcome) &
              ladder.purchase_identity_mask(variant, start + j, suffix_masks[j]);
    prices += subset_price(level, suffix_masks[j]);
  }
  RecursiveEngine engine(problem, space, ladder, depth);
  double inf = std::numeric_limits<double>::infinity();
  for (int stage = start; stage >= 1; --stage) {
    std::uint32_t mask = engine.stage_choice(stage, variant, values, inf);
    const LadderLevel& level = stack.levels[stage - 1];
    prices += subset_price(level, mask);
    values &= subset_value_event(level, mask, true_outcome) &
              ladder.purchase_identity_mask(variant, stage - 1, mask);
  }
  int final_action = action;
  if (final_action < 0) {
    final_action = static_cast<int>(engine.stage_choice(0, variant, values, inf));
  }
  return problem.u(true_outcome, final_action) - prices;
}

double recursive_exante_value(const DecisionProblem& problem, const SampleSpace& space,
                              const OfferLadder& ladder, int depth) {
  RecursiveEngine engine(problem, space, ladder, depth);
  return engine.exante_value();
}

double all_information_benchmark(const DecisionProblem& problem, const SampleSpace& space,
                                 const OfferLadder& ladder, int depth) {
  double total = 0.0;
  for (std::size_t w = 0; w < space.size(); ++w) {
    if (space.mass(w).is_zero()) continue;
    OutcomeMask values = ~OutcomeMask(0);
    const LadderStack& stack = ladder.stack_for(w);
    for (int l = 0; l < depth; ++l) {
      const LadderLevel& level = stack.levels[l];
      std::uint32_t all = (1u << level.offers.size()) - 1;
      values &= subset_value_event(level, all, w);
    }
    values &= ladder.prefix_mask(ladder.variant_of(w), depth);
    auto [act, val] = best_action_on(problem, space, values);
    (void)val;
    total += space.mass(w).to_double() * problem.u(w, act);
  }
  return total;
}

}  // namespace infoval
