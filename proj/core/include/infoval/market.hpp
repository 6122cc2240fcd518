#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "infoval/inspect.hpp"

namespace infoval {

/// How a seller prices the goods it offers.
struct PricingRule {
  enum class Kind { kFixed, kVoiFraction };
  Kind kind = Kind::kFixed;
  double price = 0.0;   // fixed price
  double lambda = 0.5;  // fraction of the seller's own ex-post VOI estimate
};

/// A seller holding private variables. It answers the buyer context at its
/// recursion level with one priced offer per private variable; offered
/// variables always coarsen (here: equal) what the seller privately holds.
struct SellerAgent {
  std::string name;
  std::vector<RandomVariable> variables;
  int level = 0;
  PricingRule pricing;
};

/// What a buyer posts to the market: the decision problem it wants
/// information for, anything it already knows, an optional budget, and how
/// many recursive inspection levels remain.
struct BuyerContext {
  DecisionProblem problem;
  Evidence public_evidence;
  std::optional<double> budget;
  int depth = 1;
};

/// One node of the recursive run: the offers collected at a level and what
/// the protocol ended up buying there.
struct MarketNode {
  int level = 0;
  std::vector<std::string> seller_of_offer;
  LadderLevel offers;
  std::uint32_t purchased = 0;
  double paid = 0.0;
};

/// Full trace of a market run, suitable for replay.
struct MarketRun {
  std::vector<MarketNode> nodes;  // by level, 0 first
  PurchasePlan plan;
  int final_action = -1;
  double total_paid = 0.0;
  std::map<std::string, double> payments;  // per seller
  LadderStack induced;                     // the ladder the offers induced
};

/// One-level inspection: collect offers, let the exact oracle buyer pick the
/// best affordable bundle, decide. Equivalent to a depth-1 recursive run.
MarketRun run_one_level(const SampleSpace& space, const BuyerContext& context,
                        const std::vector<SellerAgent>& sellers, std::size_t true_outcome);

/// Recursive inspection: sellers at level n answer the depth-n child context;
/// the induced ladder is then solved exactly as the recursive protocol, so
/// the run agrees with solve_recursive by construction and the trace records
/// every offer, purchase and payment.
MarketRun run_rip(const SampleSpace& space, const BuyerContext& context,
                  const std::vector<SellerAgent>& sellers, std::size_t true_outcome);

/// Expected buyer utility of the recursive run over outcomes (net of
/// payments), holding the induced offers fixed.
double rip_exante_value(const SampleSpace& space, const BuyerContext& context,
                        const std::vector<SellerAgent>& sellers, std::size_t true_outcome);

}  // namespace infoval
