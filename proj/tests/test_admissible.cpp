#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "infoval/admissible.hpp"
#include "infoval/errors.hpp"
#include "infoval/generator.hpp"
#include "infoval/verify.hpp"
#include "test_util.hpp"

using namespace infoval;

namespace {

// Minimal instance: one binary offer, two actions.
struct OneOfferInstance {
  SampleSpace space{{"lo", "hi"}, {Rational(1, 2), Rational(1, 2)}};
  DecisionProblem problem{{"a0", "a1"}, {{1.0, 0.0}, {0.0, 1.0}}};
  RandomVariable signal{"signal", {"0", "1"}};
  OfferLadder ladder = OfferLadder::fixed(
      LadderStack{{LadderLevel{{InfoGood{signal, "1", 0.1}}}}}, 2);
};

}  // namespace

TEST_CASE("protocol count: one binary offer, two actions") {
  OneOfferInstance inst;
  AdmissibleEnumerator enumerator(inst.problem, inst.space, inst.ladder, 1);
  // Closed form: sum over the two subset choices of |actions|^(reachable
  // value realizations): 2^1 for declining, 2^2 after buying.
  CHECK(enumerator.count() == 2 + 4);
}

TEST_CASE("protocol count: no offers means action choices only") {
  SampleSpace space({"x", "y"}, {Rational(1, 2), Rational(1, 2)});
  DecisionProblem problem({"a0", "a1", "a2"}, {{0.0, 1.0, 2.0}, {2.0, 1.0, 0.0}});
  OfferLadder ladder = OfferLadder::fixed(LadderStack{{LadderLevel{}}}, 2);
  AdmissibleEnumerator enumerator(problem, space, ladder, 1);
  CHECK(enumerator.count() == 3);

  // With nothing on offer the best protocol is the prior-best action and the
  // recursive plan ties with it exactly.
  SuperiorityReport report = verify_exante_superiority(problem, space, ladder, 1);
  CHECK(report.violations == 0);
  CHECK(report.best_admissible_value == report.recursive_value);
  CHECK(report.min_margin <= kValueTolerance);
}

TEST_CASE("budget is enforced with the computed count") {
  OneOfferInstance inst;
  AdmissibleEnumerator enumerator(inst.problem, inst.space, inst.ladder, 1, 3);
  CHECK_THROWS_AS(enumerator.count(), BudgetExceeded);
  try {
    enumerator.count();
  } catch (const BudgetExceeded& e) {
    CHECK(e.count == 4);  // counting stops one past the budget
  }
}

TEST_CASE("the recursive protocol is admissible and maximal") {
  OneOfferInstance inst;
  SuperiorityReport report =
      verify_exante_superiority(inst.problem, inst.space, inst.ladder, 1);
  CHECK(report.protocols == 6);
  CHECK(report.recursive_included);
  CHECK(report.violations == 0);
  CHECK(report.min_margin >= -kValueTolerance);
  CHECK(report.best_admissible_value ==
        doctest::Approx(report.recursive_value).epsilon(1e-12));
}

TEST_CASE("exhaustive check on the legume fixture") {
  Scenario s = testutil::load("legume.json");
  OfferLadder ladder = s.build_ladder();
  SuperiorityReport report = verify_exante_superiority(s.problem, s.space, ladder, 2);
  CHECK(report.protocols == 10506);
  CHECK(report.violations == 0);
  CHECK(report.recursive_included);
  // The recursive protocol is one of the enumerated protocols, so the best
  // admissible value equals its value exactly.
  CHECK(report.best_admissible_value ==
        doctest::Approx(report.recursive_value).epsilon(1e-12));
  CHECK(report.min_chain_slack >= -kValueTolerance);
}

TEST_CASE("superiority on a generative two-variant ladder") {
  SampleSpace space({"cheap_good", "cheap_bad", "dear_good", "dear_bad"},
                    {Rational(1, 4), Rational(1, 4), Rational(1, 4), Rational(1, 4)});
  DecisionProblem problem({"go", "stay"},
                          {{1.0, 0.0}, {-1.0, 0.0}, {1.0, 0.0}, {-1.0, 0.0}});
  RandomVariable quality("quality", {"1", "0", "1", "0"});
  LadderStack cheap;
  cheap.levels.push_back(LadderLevel{{InfoGood{quality, "1", 0.05}}});
  LadderStack dear;
  dear.levels.push_back(LadderLevel{{InfoGood{quality, "1", 0.4}}});
  OfferLadder ladder = OfferLadder::generative({cheap, dear}, {0, 0, 1, 1});

  AdmissibleEnumerator enumerator(problem, space, ladder, 1);
  // Two root contexts, one per observed variant. The base decision sees only
  // purchased goods, so the two decline branches merge into one context:
  //   (decline, decline)        -> 1 merged base context -> 2
  //   (decline, buy) and (buy, decline) -> 3 contexts    -> 8 each
  //   (buy, buy)                -> 4 contexts            -> 16
  CHECK(enumerator.count() == 2 + 8 + 8 + 16);
  SuperiorityReport report = verify_exante_superiority(problem, space, ladder, 1);
  CHECK(report.violations == 0);
  CHECK(report.recursive_included);
}

TEST_CASE("superiority suite over random instances") {
  SuperioritySuiteReport report = verify_superiority_suite(21, 25);
  CHECK(report.instances == 25);
  CHECK(report.violations == 0);
  CHECK(report.min_margin >= -kValueTolerance);
  CHECK(report.min_chain_slack >= -kValueTolerance);
}
