#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "infoval/errors.hpp"
#include "infoval/generator.hpp"
#include "infoval/prob.hpp"
#include "test_util.hpp"

using namespace infoval;

namespace {

Evidence ev(const Scenario& s, std::initializer_list<std::pair<const char*, const char*>> kv) {
  Evidence out;
  for (const auto& [name, value] : kv) out = out.with(s.variable(name), value);
  return out;
}

}  // namespace

TEST_CASE("probability on the fact-checking table") {
  Scenario s = testutil::load("factcheck.json");
  CHECK(probability(s.space, ev(s, {{"I1", "1"}})) == Rational(1, 16));
  CHECK(probability(s.space, Evidence{}) == Rational(1));
  CHECK(probability(s.space, ev(s, {{"I1", "1"}, {"I2", "1"}})) == Rational(1, 48));
  CHECK(probability(s.space, ev(s, {{"E", "1"}})) == Rational(1, 10));
}

TEST_CASE("conditioning is exact") {
  Scenario s = testutil::load("factcheck.json");
  SampleSpace given_i1 = condition(s.space, ev(s, {{"I1", "1"}}));
  CHECK(probability(given_i1, ev(s, {{"E", "1"}})) == Rational(2, 5));

  SampleSpace same = condition(s.space, Evidence{});
  for (std::size_t i = 0; i < s.space.size(); ++i) CHECK(same.mass(i) == s.space.mass(i));

  SampleSpace given_both = condition(s.space, ev(s, {{"I1", "1"}, {"I2", "1"}}));
  CHECK(probability(given_both, ev(s, {{"E", "1"}})) == Rational(1, 5));
}

TEST_CASE("impossible evidence") {
  SampleSpace space({"a", "b"}, {Rational(1), Rational(0)});
  RandomVariable flag("flag", {"0", "1"});
  Evidence impossible = Evidence{}.with(flag, "1");
  CHECK(probability(space, impossible) == Rational(0));
  CHECK_THROWS_AS(condition(space, impossible), EvidenceImpossible);
}

TEST_CASE("expectation") {
  Scenario s = testutil::load("factcheck.json");
  CHECK(expectation(s.space, [](std::size_t) { return 2.5; }) == doctest::Approx(2.5));
  const RandomVariable& e_var = s.variable("E");
  double p_e = expectation(s.space,
                           [&](std::size_t w) { return e_var.value_at(w) == "1" ? 1.0 : 0.0; });
  CHECK(p_e == doctest::Approx(0.1).epsilon(1e-12));

  SampleSpace coin({"h", "t"}, {Rational(1, 2), Rational(1, 2)});
  CHECK(expectation(coin, [](std::size_t w) { return w == 0 ? 0.0 : 1.0; }) ==
        doctest::Approx(0.5));
}

TEST_CASE("posterior masses sum to exactly one") {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    ScenarioGenerator gen(seed);
    SampleSpace space = gen.gen_space();
    RandomVariable var = gen.gen_variable(space, "I");
    for (const auto& value : var.range()) {
      OutcomeMask event = var.event(value) & space.support();
      if (space.mass_of(event).is_zero()) continue;
      SampleSpace posterior = space.conditioned_on(event);
      Rational total(0);
      for (std::size_t i = 0; i < posterior.size(); ++i) total += posterior.mass(i);
      CHECK(total == Rational(1));
    }
  }
}

TEST_CASE("law of total expectation") {
  for (std::uint64_t seed = 10; seed < 40; ++seed) {
    ScenarioGenerator gen(seed);
    SampleSpace space = gen.gen_space();
    DecisionProblem problem = gen.gen_problem(space);
    RandomVariable var = gen.gen_variable(space, "I");
    auto f = [&](std::size_t w) { return problem.u(w, 0); };
    double direct = expectation(space, f);
    double total = 0.0;
    for (const auto& value : var.range()) {
      OutcomeMask event = var.event(value) & space.support();
      Rational mass = space.mass_of(event);
      if (mass.is_zero()) continue;
      total += mass.to_double() * expectation(space.conditioned_on(event), f);
    }
    CHECK(total == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("join combines variables, values and prices") {
  Scenario s = testutil::load("factcheck.json");
  InfoGood g1 = InfoGood::from_outcome(s.variable("I1"), s.true_outcome, 0.25);
  InfoGood g2 = InfoGood::from_outcome(s.variable("I2"), s.true_outcome, 0.5);
  InfoGood both = join(s.space, {g1, g2});
  CHECK(both.variable.name() == "(I1,I2)");
  CHECK(both.realized_value == "1|1");
  CHECK(both.price == 0.75);
  CHECK(both.event() == (g1.event() & g2.event()));

  SUBCASE("commutative up to relabeling") {
    InfoGood swapped = join(s.space, {g2, g1});
    CHECK(swapped.variable == both.variable);
    CHECK(swapped.realized_value == both.realized_value);
    CHECK(swapped.price == both.price);
  }
  SUBCASE("identical goods are deduplicated before summing") {
    InfoGood twice = join(s.space, {g1, g1});
    CHECK(twice.variable == g1.variable);
    CHECK(twice.price == g1.price);
  }
  SUBCASE("null absorbs nothing") {
    InfoGood null = InfoGood::null_good(s.space);
    CHECK(join(s.space, {null}).is_null());
    InfoGood with_null = join(s.space, {null, g1});
    CHECK(with_null.variable == g1.variable);
    CHECK(with_null.price == g1.price);
  }
  SUBCASE("associative up to relabeling") {
    InfoGood e = InfoGood::from_outcome(s.variable("E"), s.true_outcome, 0.125);
    InfoGood left = join(s.space, {join(s.space, {g1, g2}), e});
    InfoGood right = join(s.space, {g1, join(s.space, {g2, e})});
    CHECK(left.price == right.price);
    CHECK(left.event() == right.event());
    // Same induced partition, whatever the labels.
    for (std::size_t i = 0; i < s.space.size(); ++i) {
      for (std::size_t j = 0; j < s.space.size(); ++j) {
        bool same_l = left.variable.value_at(i) == left.variable.value_at(j);
        bool same_r = right.variable.value_at(i) == right.variable.value_at(j);
        CHECK(same_l == same_r);
      }
    }
  }
}

TEST_CASE("join rejects jointly impossible goods") {
  SampleSpace space({"x", "y"}, {Rational(1, 2), Rational(1, 2)});
  RandomVariable a("A", {"0", "1"});
  RandomVariable b("B", {"1", "0"});
  // A=0 holds only at x, B=0 only at y: the joint event is empty.
  InfoGood ga{a, "0", 0.0};
  InfoGood gb{b, "0", 0.0};
  CHECK_THROWS_AS(join(space, {ga, gb}), InconsistentGoods);
}

TEST_CASE("evidence rejects conflicting assignments") {
  SampleSpace space({"x", "y"}, {Rational(1, 2), Rational(1, 2)});
  RandomVariable a("A", {"0", "1"});
  Evidence e = Evidence{}.with(a, "0");
  CHECK_NOTHROW(e.with(a, "0"));
  CHECK(e.with(a, "0").size() == 1);
  CHECK_THROWS_AS(e.with(a, "1"), std::invalid_argument);
}

TEST_CASE("space construction invariants") {
  CHECK_THROWS_AS(SampleSpace({"a", "a"}, {Rational(1, 2), Rational(1, 2)}),
                  std::invalid_argument);
  CHECK_THROWS_AS(SampleSpace({"a", "b"}, {Rational(1, 2), Rational(1, 4)}),
                  std::invalid_argument);
  CHECK_THROWS_AS(SampleSpace({"a", "b"}, {Rational(3, 2), Rational(-1, 2)}),
                  std::invalid_argument);
}
