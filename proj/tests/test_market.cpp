#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "infoval/generator.hpp"
#include "infoval/market.hpp"
#include "infoval/verify.hpp"
#include "test_util.hpp"

using namespace infoval;

TEST_CASE("no sellers: prior action, nothing paid") {
  Scenario s = testutil::load("factcheck.json");
  BuyerContext context = s.build_context();
  MarketRun run = run_one_level(s.space, context, {}, s.true_outcome);
  CHECK(s.problem.actions[run.final_action] == "1/10");
  CHECK(run.total_paid == 0.0);
  CHECK(run.payments.empty());
}

TEST_CASE("a free claim gets bought and moves the report") {
  Scenario s = testutil::load("factcheck.json");
  auto sellers = s.build_sellers();
  std::vector<SellerAgent> claim_only = {sellers[0]};
  BuyerContext context = s.build_context();
  MarketRun run = run_one_level(s.space, context, claim_only, s.true_outcome);
  CHECK(run.nodes[0].purchased == 1u);
  CHECK(s.problem.actions[run.final_action] == "2/5");
  CHECK(run.total_paid == 0.0);
}

TEST_CASE("the same claim priced above its worth is declined") {
  Scenario s = testutil::load("factcheck.json");
  auto sellers = s.build_sellers();
  std::vector<SellerAgent> claim_only = {sellers[0]};
  claim_only[0].pricing.price = 0.32;  // above even the ex-post gain 0.311239
  BuyerContext context = s.build_context();
  MarketRun run = run_one_level(s.space, context, claim_only, s.true_outcome);
  CHECK(run.nodes[0].purchased == 0u);
  CHECK(s.problem.actions[run.final_action] == "1/10");
  CHECK(run.payments.empty());
}

TEST_CASE("recursive run surfaces the corrective context") {
  Scenario s = testutil::load("factcheck.json");
  BuyerContext context = s.build_context();
  MarketRun run = run_rip(s.space, context, s.build_sellers(), s.true_outcome);
  CHECK(run.nodes.size() == 2);
  CHECK(run.nodes[0].purchased == 1u);
  CHECK(run.nodes[1].purchased == 1u);
  CHECK(s.problem.actions[run.final_action] == "1/5");
  CHECK(run.total_paid == 0.0);
}

TEST_CASE("legume market ends at the boiled legume") {
  Scenario s = testutil::load("legume.json");
  BuyerContext context = s.build_context();
  MarketRun run = run_rip(s.space, context, s.build_sellers(), s.true_outcome);
  CHECK(s.problem.actions[run.final_action] == "boiled_legume");
  CHECK(run.payments.at("dietician") == 0.2);
  CHECK(run.payments.at("toxicologist") == 0.0);  // bought, but free
  CHECK(run.payments.at("cook") == 0.0);
}

TEST_CASE("depth one recursive run is the one-level protocol") {
  Scenario s = testutil::load("factcheck.json");
  BuyerContext context = s.build_context();
  context.depth = 1;
  MarketRun rip = run_rip(s.space, context, s.build_sellers(), s.true_outcome);
  MarketRun one = run_one_level(s.space, context, s.build_sellers(), s.true_outcome);
  CHECK(rip.plan == one.plan);
  CHECK(rip.final_action == one.final_action);
}

TEST_CASE("payments conserve the plan price") {
  for (std::uint64_t seed = 1000; seed < 1040; ++seed) {
    ScenarioGenerator gen(seed);
    Scenario s = gen.gen_market_scenario(3);
    BuyerContext context = s.build_context();
    MarketRun run = run_rip(s.space, context, s.build_sellers(), s.true_outcome);
    double paid = 0.0;
    for (const auto& [seller, amount] : run.payments) paid += amount;
    CHECK(paid == run.plan.total_price);
    CHECK(run.total_paid == run.plan.total_price);
  }
}

TEST_CASE("harness and solver agree on the plan") {
  EquivalenceReport report = verify_harness_equivalence(41, 60);
  CHECK(report.instances == 60);
  CHECK(report.mismatches == 0);
}

TEST_CASE("deeper inspection never hurts ex ante") {
  MonotonicityReport report = verify_depth_monotonicity(51, 40);
  CHECK(report.instances == 40);
  CHECK(report.violations == 0);
  CHECK(report.min_gap >= -kValueTolerance);
}

TEST_CASE("voi-fraction pricing grounds the price in the seller's estimate") {
  Scenario s = testutil::load("factcheck.json");
  auto sellers = s.build_sellers();
  std::vector<SellerAgent> claim_only = {sellers[0]};
  claim_only[0].pricing.kind = PricingRule::Kind::kVoiFraction;
  BuyerContext context = s.build_context();

  // Seller knows I1=1; its estimate of the buyer's gain from hearing it is
  // E[U(report 2/5) - U(report 1/10) | I1=1] = 0.311..., and it asks for a
  // lambda fraction of that.
  double estimate = 0.4 * std::log(4.0) + 0.6 * std::log(2.0 / 3.0);

  SUBCASE("half the inspected value outprices the experiment: declined") {
    claim_only[0].pricing.lambda = 0.5;
    MarketRun run = run_one_level(s.space, context, claim_only, s.true_outcome);
    REQUIRE(run.nodes[0].offers.offers.size() == 1);
    CHECK(run.nodes[0].offers.offers[0].price ==
          doctest::Approx(0.5 * estimate).epsilon(1e-12));
    CHECK(run.nodes[0].purchased == 0u);
  }
  SUBCASE("a modest fraction stays under the experiment value: bought") {
    claim_only[0].pricing.lambda = 0.05;
    MarketRun run = run_one_level(s.space, context, claim_only, s.true_outcome);
    CHECK(run.nodes[0].offers.offers[0].price ==
          doctest::Approx(0.05 * estimate).epsilon(1e-12));
    CHECK(run.nodes[0].purchased == 1u);
  }
}

TEST_CASE("budgets are hard feasibility constraints") {
  Scenario s = testutil::load("legume.json");
  BuyerContext context = s.build_context();
  context.budget = 0.0;
  MarketRun run = run_rip(s.space, context, s.build_sellers(), s.true_outcome);
  // Only free goods are affordable.
  CHECK(run.total_paid == 0.0);
  for (const auto& node : run.nodes) {
    for (std::size_t i = 0; i < node.offers.offers.size(); ++i) {
      if (node.purchased & (1u << i)) {
        CHECK(node.offers.offers[i].price == 0.0);
      }
    }
  }
}
