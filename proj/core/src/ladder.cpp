#include "infoval/ladder.hpp"

#include <stdexcept>

namespace infoval {

namespace {

bool level_content_equal(const LadderLevel& a, const LadderLevel& b) {
  if (a.offers.size() != b.offers.size()) return false;
  for (std::size_t i = 0; i < a.offers.size(); ++i) {
    if (!(a.offers[i].variable == b.offers[i].variable) ||
        a.offers[i].price != b.offers[i].price) {
      return false;
    }
  }
  return true;
}

bool prefix_equal(const LadderStack& a, const LadderStack& b, int len) {
  for (int l = 0; l < len; ++l) {
    if (!level_content_equal(a.levels[l], b.levels[l])) return false;
  }
  return true;
}

void validate_stack(const LadderStack& stack) {
  for (const auto& level : stack.levels) {
    if (level.offers.size() > kMaxOffersPerLevel) {
      throw std::invalid_argument("offer level exceeds " +
                                  std::to_string(kMaxOffersPerLevel) + " non-null offers");
    }
    for (const auto& offer : level.offers) {
      if (offer.price < 0.0) throw std::invalid_argument("negative offer price");
    }
  }
}

}  // namespace

OfferLadder OfferLadder::fixed(LadderStack stack, std::size_t n_outcomes) {
  validate_stack(stack);
  OfferLadder ladder;
  ladder.variants_.push_back(std::move(stack));
  ladder.outcome_variant_.assign(n_outcomes, 0);
  ladder.index_prefixes();
  return ladder;
}

OfferLadder OfferLadder::generative(std::vector<LadderStack> variants,
                                    std::vector<int> outcome_variant) {
  if (variants.empty()) throw std::invalid_argument("generative ladder with no variants");
  std::size_t depth = variants.front().levels.size();
  for (const auto& v : variants) {
    validate_stack(v);
    if (v.levels.size() != depth) {
      throw std::invalid_argument("generative ladder variants must share a depth");
    }
    // The revealed variables are fixed; only values and prices vary with the
    // outcome. This keeps purchased-good identity a per-level price vector.
    for (std::size_t l = 0; l < depth; ++l) {
      const auto& base = variants.front().levels[l].offers;
      const auto& here = v.levels[l].offers;
      if (here.size() != base.size()) {
        throw std::invalid_argument("generative variants must offer the same variables");
      }
      for (std::size_t i = 0; i < base.size(); ++i) {
        if (!(here[i].variable == base[i].variable)) {
          throw std::invalid_argument("generative variants must offer the same variables");
        }
      }
    }
  }
  for (int v : outcome_variant) {
    if (v < 0 || v >= static_cast<int>(variants.size())) {
      throw std::invalid_argument("outcome mapped to missing ladder variant");
    }
  }
  OfferLadder ladder;
  ladder.variants_ = std::move(variants);
  ladder.outcome_variant_ = std::move(outcome_variant);
  ladder.index_prefixes();
  return ladder;
}

void OfferLadder::index_prefixes() {
  int n_var = static_cast<int>(variants_.size());
  int depth_n = depth();
  prefix_class_.assign(depth_n + 1, std::vector<int>(n_var, 0));
  prefix_mask_.assign(depth_n + 1, std::vector<OutcomeMask>(n_var, 0));
  for (int len = 0; len <= depth_n; ++len) {
    for (int v = 0; v < n_var; ++v) {
      int rep = v;
      for (int u = 0; u < v; ++u) {
        if (prefix_equal(variants_[u], variants_[v], len)) {
          rep = prefix_class_[len][u];
          break;
        }
      }
      prefix_class_[len][v] = rep;
    }
    for (std::size_t w = 0; w < outcome_variant_.size(); ++w) {
      int rep = prefix_class_[len][outcome_variant_[w]];
      prefix_mask_[len][rep] |= OutcomeMask(1) << w;
    }
    // Every variant shares its representative's mask.
    for (int v = 0; v < n_var; ++v) {
      prefix_mask_[len][v] = prefix_mask_[len][prefix_class_[len][v]];
    }
  }
}

OutcomeMask OfferLadder::prefix_mask(int v, int prefix_len) const {
  return prefix_mask_[prefix_len][v];
}

int OfferLadder::prefix_rep(int v, int prefix_len) const {
  return prefix_class_[prefix_len][v];
}

OutcomeMask OfferLadder::purchase_identity_mask(int v, int level, std::uint32_t mask) const {
  if (variants_.size() == 1 || mask == 0) return ~OutcomeMask(0);
  const LadderLevel& own = variants_[v].levels[level];
  OutcomeMask out = 0;
  for (std::size_t w = 0; w < outcome_variant_.size(); ++w) {
    const LadderLevel& other = variants_[outcome_variant_[w]].levels[level];
    bool same = true;
    for (std::size_t i = 0; i < own.offers.size() && same; ++i) {
      if (mask & (1u << i)) same = other.offers[i].price == own.offers[i].price;
    }
    if (same) out |= OutcomeMask(1) << w;
  }
  return out;
}

double subset_price(const LadderLevel& level, std::uint32_t mask) {
  double price = 0.0;
  for (std::size_t i = 0; i < level.offers.size(); ++i) {
    if (mask & (1u << i)) price += level.offers[i].price;
  }
  return price;
}

OutcomeMask subset_value_event(const LadderLevel& level, std::uint32_t mask,
                               std::size_t outcome) {
  OutcomeMask event = ~OutcomeMask(0);
  for (std::size_t i = 0; i < level.offers.size(); ++i) {
    if (mask & (1u << i)) {
      const RandomVariable& var = level.offers[i].variable;
      event &= var.event(var.value_at(outcome));
    }
  }
  return event;
}

std::string plan_to_string(const PurchasePlan& plan, const DecisionProblem& problem,
                           const LadderStack& stack) {
  std::string out = "action=";
  out += plan.action >= 0 ? problem.actions[plan.action] : std::string("?");
  for (std::size_t l = 0; l < plan.purchases.size(); ++l) {
    out += "; level" + std::to_string(l) + "={";
    bool first = true;
    for (std::size_t i = 0; i < stack.levels[l].offers.size(); ++i) {
      if (plan.purchases[l] & (1u << i)) {
        if (!first) out += ",";
        out += stack.levels[l].offers[i].variable.name();
        first = false;
      }
    }
    out += "}";
  }
  return out;
}

}  // namespace infoval
