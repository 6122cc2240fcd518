#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "infoval/decision.hpp"
#include "infoval/errors.hpp"
#include "infoval/generator.hpp"
#include "test_util.hpp"

using namespace infoval;

namespace {

Evidence ev(const Scenario& s, std::initializer_list<std::pair<const char*, const char*>> kv) {
  Evidence out;
  for (const auto& [name, value] : kv) out = out.with(s.variable(name), value);
  return out;
}

// Direct transcription of the ex-post definition for the fact-check grid:
// posterior q against prior report p0 under the log score.
double log_score_ex_post(double q, double p0, double price) {
  return q * std::log(q / p0) + (1.0 - q) * std::log((1.0 - q) / (1.0 - p0)) - price;
}

}  // namespace

TEST_CASE("best_action matches the posterior on the report grid") {
  Scenario s = testutil::load("factcheck.json");
  CHECK(s.problem.actions[best_action(s.problem, s.space, Evidence{}).first] == "1/10");
  CHECK(s.problem.actions[best_action(s.problem, s.space, ev(s, {{"I1", "1"}})).first] ==
        "2/5");
  CHECK(s.problem.actions[best_action(s.problem, s.space,
                                      ev(s, {{"I1", "1"}, {"I2", "1"}}))
                              .first] == "1/5");
}

TEST_CASE("single-action problems pick the only action") {
  SampleSpace space({"a", "b"}, {Rational(1, 2), Rational(1, 2)});
  DecisionProblem problem({"only"}, {{3.0}, {-1.0}});
  CHECK(best_action(problem, space, Evidence{}).first == 0);
}

TEST_CASE("realized value of information on the fact-check example") {
  Scenario s = testutil::load("factcheck.json");
  InfoGood i1 = InfoGood::from_outcome(s.variable("I1"), s.true_outcome, 0.0);
  CHECK(realized_voi(s.problem, s.space, i1, s.true_outcome) ==
        doctest::Approx(std::log(4.0)).epsilon(1e-12));

  InfoGood both = join(s.space, {i1, InfoGood::from_outcome(s.variable("I2"), s.true_outcome,
                                                            0.0)});
  CHECK(realized_voi(s.problem, s.space, both, s.true_outcome) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));

  CHECK(realized_voi(s.problem, s.space, InfoGood::null_good(s.space), s.true_outcome) == 0.0);

  InfoGood wrong = i1;
  wrong.realized_value = "0";
  CHECK_THROWS_AS(realized_voi(s.problem, s.space, wrong, s.true_outcome), InconsistentGoods);
}

TEST_CASE("ex-post value: revealing the claim beats revealing the context too") {
  Scenario s = testutil::load("factcheck.json");
  InfoGood i1 = InfoGood::from_outcome(s.variable("I1"), s.true_outcome, 0.0);
  double expost_i1 = voi_ex_post(s.problem, s.space, i1);
  CHECK(expost_i1 == doctest::Approx(log_score_ex_post(0.4, 0.1, 0.0)).epsilon(1e-12));
  CHECK(expost_i1 == doctest::Approx(0.311239).epsilon(1e-6));

  InfoGood both = join(s.space, {i1, InfoGood::from_outcome(s.variable("I2"), s.true_outcome,
                                                            0.0)});
  double expost_both = voi_ex_post(s.problem, s.space, both);
  CHECK(expost_both == doctest::Approx(log_score_ex_post(0.2, 0.1, 0.0)).epsilon(1e-12));
  CHECK(expost_both == doctest::Approx(0.044403).epsilon(1e-6));

  // The seller's incentive to withhold the context, under both readings.
  CHECK(expost_i1 > expost_both);
  CHECK(realized_voi(s.problem, s.space, i1, s.true_outcome) >
        realized_voi(s.problem, s.space, both, s.true_outcome));
}

TEST_CASE("ex-post value of an irrelevant variable is minus its price") {
  SampleSpace space({"a0", "a1", "b0", "b1"},
                    {Rational(1, 4), Rational(1, 4), Rational(1, 4), Rational(1, 4)});
  DecisionProblem problem({"x", "y"}, {{1.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {0.0, 1.0}});
  // Splits {a0,b0} vs {a1,b1}: independent of the utility-relevant split.
  RandomVariable noise("noise", {"0", "1", "0", "1"});
  InfoGood good{noise, "0", 0.3};
  CHECK(voi_ex_post(problem, space, good) == doctest::Approx(-0.3).epsilon(1e-12));
  CHECK(voi_ex_post(problem, space, InfoGood::null_good(space)) == 0.0);
}

TEST_CASE("ex-ante value of the experiment") {
  Scenario s = testutil::load("factcheck.json");
  double expected = Rational(1, 16).to_double() * log_score_ex_post(0.4, 0.1, 0.0) +
                    Rational(15, 16).to_double() * log_score_ex_post(0.08, 0.1, 0.0);
  double got = voi_ex_ante(s.problem, s.space, s.variable("I1"), 0.0);
  CHECK(got == doctest::Approx(expected).epsilon(1e-12));
  CHECK(got == doctest::Approx(0.021673).epsilon(1e-5));

  RandomVariable constant("c", std::vector<std::string>(s.space.size(), "k"));
  CHECK(voi_ex_ante(s.problem, s.space, constant, 0.0) == 0.0);

  double priced = voi_ex_ante(s.problem, s.space, s.variable("I1"), 0.125);
  CHECK(got - priced == doctest::Approx(0.125).epsilon(1e-12));
}

TEST_CASE("gain-from-information suite runs clean") {
  PropertyReport report = verify_gain_from_information(7, 1000);
  CHECK(report.trials == 1000);
  CHECK(report.violations == 0);
  CHECK(report.min_slack >= -kValueTolerance);
}

TEST_CASE("gain-from-information edge values") {
  Scenario s = testutil::load("factcheck.json");
  // Constant variables give equality: no information, zero slack.
  RandomVariable constant("c", std::vector<std::string>(s.space.size(), "k"));
  CHECK(voi_ex_ante(s.problem, s.space, constant, 0.0) == 0.0);
  // The fact-check slack equals the experiment value of the claim variable.
  double slack = voi_ex_ante(s.problem, s.space, s.variable("I1"), 0.0);
  CHECK(slack == doctest::Approx(0.021673).epsilon(1e-5));
}

TEST_CASE("argmax is invariant under affine utility changes") {
  for (std::uint64_t seed = 100; seed < 130; ++seed) {
    ScenarioGenerator gen(seed);
    SampleSpace space = gen.gen_space();
    DecisionProblem problem = gen.gen_problem(space);
    DecisionProblem shifted = problem;
    DecisionProblem scaled = problem;
    for (auto& row : shifted.utility) {
      for (auto& u : row) u += 0.5;
    }
    for (auto& row : scaled.utility) {
      for (auto& u : row) u *= 2.0;
    }
    RandomVariable var = gen.gen_variable(space, "I");
    for (const auto& value : var.range()) {
      OutcomeMask event = var.event(value) & space.support();
      if (space.mass_of(event).is_zero()) continue;
      int base = best_action_on(problem, space, event).first;
      CHECK(best_action_on(shifted, space, event).first == base);
      CHECK(best_action_on(scaled, space, event).first == base);
    }
  }
}

TEST_CASE("realized value averages to the experiment value") {
  for (std::uint64_t seed = 200; seed < 230; ++seed) {
    ScenarioGenerator gen(seed);
    SampleSpace space = gen.gen_space();
    DecisionProblem problem = gen.gen_problem(space);
    RandomVariable var = gen.gen_variable(space, "I");
    double price = 0.125;
    double averaged = 0.0;
    for (std::size_t w = 0; w < space.size(); ++w) {
      if (space.mass(w).is_zero()) continue;
      InfoGood good = InfoGood::from_outcome(var, w, price);
      averaged += space.mass(w).to_double() * realized_voi(problem, space, good, w);
    }
    double ex_ante = voi_ex_ante(problem, space, var, price);
    CHECK(averaged == doctest::Approx(ex_ante).epsilon(1e-9));
  }
}

TEST_CASE("voi report is internally consistent") {
  Scenario s = testutil::load("factcheck.json");
  InfoGood i1 = InfoGood::from_outcome(s.variable("I1"), s.true_outcome, 0.0);
  VoiReport report = make_voi_report(s.problem, s.space, i1, s.true_outcome);
  CHECK(report.realized == realized_voi(s.problem, s.space, i1, s.true_outcome));
  CHECK(report.ex_post == voi_ex_post(s.problem, s.space, i1));
  CHECK(report.ex_ante == voi_ex_ante(s.problem, s.space, i1.variable, 0.0));
  CHECK(s.problem.actions[report.best_action_prior] == "1/10");
  CHECK(s.problem.actions[report.best_action_posterior] == "2/5");

  VoiReport null_report =
      make_voi_report(s.problem, s.space, InfoGood::null_good(s.space), s.true_outcome);
  CHECK(null_report.ex_ante == 0.0);
  CHECK(null_report.ex_post == 0.0);
}
