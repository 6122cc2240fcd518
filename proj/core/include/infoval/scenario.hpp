#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "infoval/market.hpp"
#include "infoval/oversight.hpp"

namespace infoval {

struct LadderOfferSpec {
  std::string variable;
  double price = 0.0;
};

struct LadderSpec {
  std::string mode = "fixed";  // fixed | generative
  std::vector<std::vector<LadderOfferSpec>> levels;
  // generative mode: the named variable selects the variant per outcome
  std::string selector;
  std::map<std::string, std::vector<std::vector<LadderOfferSpec>>> variants;
};

struct SellerSpec {
  std::string name;
  std::vector<std::string> variables;
  int level = 0;
  std::string rule = "fixed";  // fixed | voi-fraction
  double price = 0.0;
  double lambda = 0.5;
};

struct OversightSpec {
  std::string knowledge;
  int depth_cap = 16;
  std::uint64_t history_budget = 200'000;
  std::vector<LadderOfferSpec> moves;
};

/// A load-time assertion baked into the scenario file. Kinds:
///   probability             exact rational mass of `evidence`
///   conditional_probability exact rational mass of `event` given `evidence`
///   expected_utility        E[U(action) | evidence] within `tol`
struct FixtureCheck {
  std::string kind;
  std::map<std::string, std::string> evidence;
  std::map<std::string, std::string> event;
  std::string action;
  std::string equals;
  double tol = 0.0;
};

struct ScenarioParams {
  int depth = 1;
  std::uint64_t seed = 0;
  std::uint64_t protocol_budget = 1'000'000;
  std::optional<double> buyer_budget;
};

/// Everything a scenario file describes, fully validated. A scenario always
/// carries a space, a designated true outcome, named variables and a decision
/// problem; ladder, sellers and oversight sections are optional.
class Scenario {
 public:
  Scenario(std::string name, SampleSpace space, int true_outcome,
           std::vector<RandomVariable> variables, DecisionProblem problem);

  std::string name;
  SampleSpace space;
  int true_outcome;
  std::vector<RandomVariable> variables;  // sorted by name
  DecisionProblem problem;

  // Decision source, kept for lossless round-trips: either an explicit table
  // (log_score false) or a log-score grid over an event variable.
  bool log_score = false;
  std::string log_event;
  std::vector<Rational> log_grid;

  std::optional<LadderSpec> ladder_spec;
  std::vector<SellerSpec> sellers;
  std::optional<OversightSpec> oversight;
  std::vector<FixtureCheck> checks;
  ScenarioParams params;

  const RandomVariable& variable(const std::string& var_name) const;
  bool has_variable(const std::string& var_name) const;

  Evidence evidence_from(const std::map<std::string, std::string>& assignments) const;

  OfferLadder build_ladder() const;
  std::vector<SellerAgent> build_sellers() const;
  BuyerContext build_context() const;
  OversightInstance build_oversight() const;
};

/// Parses and validates a scenario document, then runs its fixture checks.
/// Throws ParseError on malformed input and FixtureViolation when a baked-in
/// assertion fails.
Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& json_text);

/// Canonical serialization: load(serialize(s)) is the identity and
/// serialize(load(doc)) is byte-identical for canonical documents.
std::string serialize_scenario(const Scenario& scenario);

void save_scenario(const Scenario& scenario, const std::string& path);

/// Runs the scenario's embedded checks; throws FixtureViolation naming the
/// failed assertion and both sides of the comparison.
void run_fixture_checks(const Scenario& scenario);

}  // namespace infoval
