#include "infoval/market.hpp"

#include <algorithm>
#include <stdexcept>

namespace infoval {

namespace {

// The seller's own estimate of its good's worth: the conditional expected
// improvement the good makes to the buyer's decision, evaluated under
// everything the seller privately knows plus the public evidence.
double seller_voi_estimate(const SampleSpace& space, const BuyerContext& context,
                           const SellerAgent& seller, const InfoGood& good,
                           std::size_t true_outcome) {
  Evidence seller_view = context.public_evidence;
  for (const auto& var : seller.variables) {
    seller_view = seller_view.with(var, var.value_at(true_outcome));
  }
  OutcomeMask base = context.public_evidence.event(space);
  OutcomeMask with_good = base & good.event();
  OutcomeMask view = seller_view.event(space);
  auto [base_action, base_value] = best_action_on(context.problem, space, base);
  (void)base_value;
  auto [good_action, good_value] = best_action_on(context.problem, space, with_good);
  (void)good_value;
  SampleSpace posterior = space.conditioned_on(view);
  double estimate = 0.0;
  for (std::size_t w = 0; w < posterior.size(); ++w) {
    if (posterior.mass(w).is_zero()) continue;
    estimate += posterior.mass(w).to_double() *
                (context.problem.u(w, good_action) - context.problem.u(w, base_action));
  }
  return estimate;
}

MarketRun run_market(const SampleSpace& space, const BuyerContext& context,
                     const std::vector<SellerAgent>& sellers, std::size_t true_outcome) {
  if (context.depth < 1) throw std::invalid_argument("market run needs depth >= 1");
  MarketRun run;
  // Post the context (and each recursive child context) to the sellers
  // serving that level; collect one offer per private variable.
  for (int level = 0; level < context.depth; ++level) {
    MarketNode node;
    node.level = level;
    for (const auto& seller : sellers) {
      if (seller.level != level) continue;
      for (const auto& var : seller.variables) {
        InfoGood good = InfoGood::from_outcome(var, true_outcome, 0.0);
        switch (seller.pricing.kind) {
          case PricingRule::Kind::kFixed:
            good.price = seller.pricing.price;
            break;
          case PricingRule::Kind::kVoiFraction:
            good.price = seller.pricing.lambda *
                         std::max(0.0, seller_voi_estimate(space, context, seller, good,
                                                           true_outcome));
            break;
        }
        node.offers.offers.push_back(good);
        node.seller_of_offer.push_back(seller.name);
      }
    }
    run.induced.levels.push_back(node.offers);
    run.nodes.push_back(std::move(node));
  }

  OfferLadder ladder = OfferLadder::fixed(run.induced, space.size());
  run.plan = solve_recursive(context.problem, space, ladder, context.depth, true_outcome,
                             context.budget, context.public_evidence.event(space));
  run.final_action = run.plan.action;
  run.total_paid = run.plan.total_price;
  for (int level = 0; level < context.depth; ++level) {
    MarketNode& node = run.nodes[level];
    node.purchased = run.plan.purchases[level];
    for (std::size_t i = 0; i < node.offers.offers.size(); ++i) {
      if (node.purchased & (1u << i)) {
        double price = node.offers.offers[i].price;
        node.paid += price;
        run.payments[node.seller_of_offer[i]] += price;
      }
    }
  }
  return run;
}

}  // namespace

MarketRun run_one_level(const SampleSpace& space, const BuyerContext& context,
                        const std::vector<SellerAgent>& sellers, std::size_t true_outcome) {
  BuyerContext one = context;
  one.depth = 1;
  return run_market(space, one, sellers, true_outcome);
}

MarketRun run_rip(const SampleSpace& space, const BuyerContext& context,
                  const std::vector<SellerAgent>& sellers, std::size_t true_outcome) {
  return run_market(space, context, sellers, true_outcome);
}

double rip_exante_value(const SampleSpace& space, const BuyerContext& context,
                        const std::vector<SellerAgent>& sellers, std::size_t true_outcome) {
  MarketRun run = run_rip(space, context, sellers, true_outcome);
  OfferLadder ladder = OfferLadder::fixed(run.induced, space.size());
  RecursiveEngine engine(context.problem, space, ladder, context.depth, context.budget,
                         context.public_evidence.event(space));
  return engine.exante_value();
}

}  // namespace infoval
