#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "infoval/decision.hpp"
#include "infoval/prob.hpp"

namespace infoval {

/// Exhaustive subset choice over a level is exponential; levels are capped.
inline constexpr std::size_t kMaxOffersPerLevel = 6;

/// One offer level: the non-null goods on offer. The null good (decline) is
/// implicit; choosing the empty subset buys it.
struct LadderLevel {
  std::vector<InfoGood> offers;
};

/// A full stack of offer levels. Level n holds the goods offered to help
/// decide the level-(n-1) choice; level 0 serves the base decision problem.
struct LadderStack {
  std::vector<LadderLevel> levels;
};

/// Level-indexed offer sets. In fixed mode one stack serves every outcome and
/// which goods are on offer reveals nothing. In generative mode the stack is
/// a function of the outcome, so the observed offers are themselves evidence:
/// a decision at stage n conditions on the stack prefix below its level, and
/// has forgotten the realization of higher levels.
class OfferLadder {
 public:
  static OfferLadder fixed(LadderStack stack, std::size_t n_outcomes);
  static OfferLadder generative(std::vector<LadderStack> variants,
                                std::vector<int> outcome_variant);

  bool is_generative() const { return variants_.size() > 1; }
  int depth() const { return static_cast<int>(variants_.front().levels.size()); }
  std::size_t outcome_count() const { return outcome_variant_.size(); }

  int variant_of(std::size_t outcome) const { return outcome_variant_[outcome]; }
  int variant_count() const { return static_cast<int>(variants_.size()); }
  const LadderStack& variant(int v) const { return variants_[v]; }
  const LadderStack& stack_for(std::size_t outcome) const {
    return variants_[outcome_variant_[outcome]];
  }

  /// Outcomes whose stack agrees with variant v on levels [0, prefix_len).
  OutcomeMask prefix_mask(int v, int prefix_len) const;

  /// Smallest variant index whose prefix [0, prefix_len) matches variant v's.
  int prefix_rep(int v, int prefix_len) const;

  /// Outcomes whose level-`level` offers at the mask's indices carry the same
  /// prices as variant v's. A purchased good's price is part of the tuple the
  /// buyer keeps, so holding it is evidence about which stack was realized
  /// even after the offer sets themselves are forgotten.
  OutcomeMask purchase_identity_mask(int v, int level, std::uint32_t mask) const;

 private:
  OfferLadder() = default;
  void index_prefixes();

  std::vector<LadderStack> variants_;
  std::vector<int> outcome_variant_;
  // prefix_class_[len][v] = representative variant of v's length-len prefix class
  std::vector<std::vector<int>> prefix_class_;
  // prefix_mask_[len][v] = outcomes whose prefix of length len matches v's
  std::vector<std::vector<OutcomeMask>> prefix_mask_;
};

/// A resolved run of a protocol: the base action, the purchased subset of
/// each offer level, and the summed price of everything bought.
/// purchases[l] is a bitmask over offers of ladder level l, so entry l is
/// the choice made at stage l+1.
struct PurchasePlan {
  int action = -1;
  std::vector<std::uint32_t> purchases;
  double total_price = 0.0;

  friend bool operator==(const PurchasePlan& a, const PurchasePlan& b) {
    return a.action == b.action && a.purchases == b.purchases &&
           a.total_price == b.total_price;
  }
  friend bool operator!=(const PurchasePlan& a, const PurchasePlan& b) { return !(a == b); }
};

/// Price of a subset of one level's offers.
double subset_price(const LadderLevel& level, std::uint32_t mask);

/// Joined value event of a subset at a given outcome: the conjunction of
/// {I = I(outcome)} over the chosen goods. Empty subsets give the full mask.
OutcomeMask subset_value_event(const LadderLevel& level, std::uint32_t mask,
                               std::size_t outcome);

std::string plan_to_string(const PurchasePlan& plan, const DecisionProblem& problem,
                           const LadderStack& stack);

}  // namespace infoval
