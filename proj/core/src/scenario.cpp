#include "infoval/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "infoval/errors.hpp"

namespace infoval {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

Scenario::Scenario(std::string name_in, SampleSpace space_in, int true_outcome_in,
                   std::vector<RandomVariable> variables_in, DecisionProblem problem_in)
    : name(std::move(name_in)),
      space(std::move(space_in)),
      true_outcome(true_outcome_in),
      variables(std::move(variables_in)),
      problem(std::move(problem_in)) {
  if (true_outcome < 0 || static_cast<std::size_t>(true_outcome) >= space.size()) {
    throw std::invalid_argument("true outcome index out of range");
  }
  if (space.mass(true_outcome).is_zero()) {
    throw std::invalid_argument("true outcome has zero prior mass");
  }
  std::sort(variables.begin(), variables.end(),
            [](const RandomVariable& a, const RandomVariable& b) { return a.name() < b.name(); });
  for (std::size_t i = 1; i < variables.size(); ++i) {
    if (variables[i].name() == variables[i - 1].name()) {
      throw std::invalid_argument("duplicate variable name '" + variables[i].name() + "'");
    }
  }
  for (const auto& var : variables) {
    if (var.domain_size() != space.size()) {
      throw std::invalid_argument("variable '" + var.name() + "' is not total over the space");
    }
  }
}

const RandomVariable& Scenario::variable(const std::string& var_name) const {
  for (const auto& var : variables) {
    if (var.name() == var_name) return var;
  }
  throw std::invalid_argument("unknown variable '" + var_name + "'");
}

bool Scenario::has_variable(const std::string& var_name) const {
  for (const auto& var : variables) {
    if (var.name() == var_name) return true;
  }
  return false;
}

Evidence Scenario::evidence_from(const std::map<std::string, std::string>& assignments) const {
  Evidence ev;
  for (const auto& [name_, value] : assignments) {
    ev = ev.with(variable(name_), value);
  }
  return ev;
}

namespace {

LadderLevel build_level(const Scenario& scenario,
                        const std::vector<LadderOfferSpec>& level_spec) {
  LadderLevel level;
  for (const auto& offer : level_spec) {
    level.offers.push_back(InfoGood::from_outcome(scenario.variable(offer.variable),
                                                  scenario.true_outcome, offer.price));
  }
  return level;
}

}  // namespace

OfferLadder Scenario::build_ladder() const {
  if (!ladder_spec) throw std::invalid_argument("scenario has no ladder section");
  const LadderSpec& spec = *ladder_spec;
  if (spec.mode == "fixed") {
    LadderStack stack;
    for (const auto& level : spec.levels) stack.levels.push_back(build_level(*this, level));
    return OfferLadder::fixed(std::move(stack), space.size());
  }
  if (spec.mode != "generative") {
    throw std::invalid_argument("unknown ladder mode '" + spec.mode + "'");
  }
  const RandomVariable& selector = variable(spec.selector);
  std::vector<LadderStack> stacks;
  std::vector<std::string> keys;
  for (const auto& [value, levels] : spec.variants) {
    LadderStack stack;
    for (const auto& level : levels) stack.levels.push_back(build_level(*this, level));
    keys.push_back(value);
    stacks.push_back(std::move(stack));
  }
  std::vector<int> outcome_variant(space.size(), -1);
  for (std::size_t w = 0; w < space.size(); ++w) {
    const std::string& value = selector.value_at(w);
    auto it = std::find(keys.begin(), keys.end(), value);
    if (it == keys.end()) {
      throw std::invalid_argument("no ladder variant for selector value '" + value + "'");
    }
    outcome_variant[w] = static_cast<int>(it - keys.begin());
  }
  return OfferLadder::generative(std::move(stacks), std::move(outcome_variant));
}

std::vector<SellerAgent> Scenario::build_sellers() const {
  std::vector<SellerAgent> out;
  for (const auto& spec : sellers) {
    SellerAgent agent;
    agent.name = spec.name;
    agent.level = spec.level;
    for (const auto& var : spec.variables) agent.variables.push_back(variable(var));
    if (spec.rule == "fixed") {
      agent.pricing.kind = PricingRule::Kind::kFixed;
      agent.pricing.price = spec.price;
    } else if (spec.rule == "voi-fraction") {
      agent.pricing.kind = PricingRule::Kind::kVoiFraction;
      agent.pricing.lambda = spec.lambda;
    } else {
      throw std::invalid_argument("unknown pricing rule '" + spec.rule + "'");
    }
    out.push_back(std::move(agent));
  }
  return out;
}

BuyerContext Scenario::build_context() const {
  BuyerContext context;
  context.problem = problem;
  context.depth = params.depth;
  context.budget = params.buyer_budget;
  return context;
}

OversightInstance Scenario::build_oversight() const {
  if (!oversight) throw std::invalid_argument("scenario has no oversight section");
  std::vector<std::pair<RandomVariable, double>> base;
  for (const auto& move : oversight->moves) {
    base.emplace_back(variable(move.variable), move.price);
  }
  return OversightInstance(space, problem, variable(oversight->knowledge), true_outcome,
                           std::move(base), oversight->depth_cap, oversight->history_budget);
}

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ParseError("scenario." + where + ": " + what);
}

const json& need(const json& doc, const char* field, const std::string& where) {
  auto it = doc.find(field);
  if (it == doc.end()) fail(where, std::string("missing field '") + field + "'");
  return *it;
}

Rational parse_rational_field(const json& value, const std::string& where) {
  try {
    if (value.is_string()) return Rational::parse(value.get<std::string>());
    if (value.is_number_integer()) return Rational(value.get<long long>());
  } catch (const std::exception& e) {
    fail(where, e.what());
  }
  fail(where, "expected a fraction string");
}

std::map<std::string, std::string> parse_string_map(const json& value,
                                                    const std::string& where) {
  if (!value.is_object()) fail(where, "expected an object of variable=value pairs");
  std::map<std::string, std::string> out;
  for (const auto& [k, v] : value.items()) {
    if (!v.is_string()) fail(where, "assignment values must be strings");
    out[k] = v.get<std::string>();
  }
  return out;
}

std::vector<std::vector<LadderOfferSpec>> parse_levels(const json& value,
                                                       const std::string& where) {
  if (!value.is_array()) fail(where, "expected an array of levels");
  std::vector<std::vector<LadderOfferSpec>> levels;
  for (const auto& level : value) {
    if (!level.is_array()) fail(where, "each level must be an array of offers");
    std::vector<LadderOfferSpec> offers;
    for (const auto& offer : level) {
      LadderOfferSpec spec;
      spec.variable = need(offer, "variable", where).get<std::string>();
      spec.price = offer.value("price", 0.0);
      if (spec.price < 0.0) fail(where, "negative offer price");
      offers.push_back(std::move(spec));
    }
    levels.push_back(std::move(offers));
  }
  return levels;
}

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("scenario: ") + e.what());
  }

  const json& space_doc = need(doc, "space", "space");
  std::vector<std::string> outcomes;
  for (const auto& label : need(space_doc, "outcomes", "space.outcomes")) {
    outcomes.push_back(label.get<std::string>());
  }
  std::vector<Rational> prior;
  for (const auto& mass : need(space_doc, "prior", "space.prior")) {
    prior.push_back(parse_rational_field(mass, "space.prior"));
  }
  SampleSpace space = [&] {
    try {
      return SampleSpace(std::move(outcomes), std::move(prior));
    } catch (const std::exception& e) {
      throw FixtureViolation(std::string("space: ") + e.what());
    }
  }();

  std::vector<RandomVariable> variables;
  for (const auto& [name, values] : need(doc, "variables", "variables").items()) {
    if (!values.is_array() || values.size() != space.size()) {
      fail("variables." + name, "valuation must list one value per outcome");
    }
    std::vector<std::string> vals;
    for (const auto& v : values) vals.push_back(v.get<std::string>());
    variables.emplace_back(name, std::move(vals));
  }

  int true_outcome = space.index_of(need(doc, "true_outcome", "true_outcome").get<std::string>());
  if (true_outcome < 0) fail("true_outcome", "label not in the outcome set");

  const json& decision = need(doc, "decision", "decision");
  bool log_score = decision.contains("log_score");
  std::string log_event;
  std::vector<Rational> log_grid;
  DecisionProblem problem;
  if (log_score) {
    const json& ls = decision["log_score"];
    log_event = need(ls, "event", "decision.log_score").get<std::string>();
    for (const auto& g : need(ls, "grid", "decision.log_score.grid")) {
      log_grid.push_back(parse_rational_field(g, "decision.log_score.grid"));
    }
    auto it = std::find_if(variables.begin(), variables.end(),
                           [&](const RandomVariable& v) { return v.name() == log_event; });
    if (it == variables.end()) fail("decision.log_score.event", "unknown variable");
    try {
      problem = log_score_problem(space, *it, log_grid);
    } catch (const std::exception& e) {
      fail("decision.log_score", e.what());
    }
  } else {
    std::vector<std::string> actions;
    for (const auto& a : need(decision, "actions", "decision.actions")) {
      actions.push_back(a.get<std::string>());
    }
    std::vector<std::vector<double>> utility;
    for (const auto& row : need(decision, "utility", "decision.utility")) {
      utility.push_back(row.get<std::vector<double>>());
    }
    if (utility.size() != space.size()) {
      fail("decision.utility", "one row per outcome required");
    }
    try {
      problem = DecisionProblem(std::move(actions), std::move(utility));
    } catch (const std::exception& e) {
      fail("decision", e.what());
    }
  }

  Scenario scenario(doc.value("name", std::string("scenario")), std::move(space), true_outcome,
                    std::move(variables), std::move(problem));
  scenario.log_score = log_score;
  scenario.log_event = std::move(log_event);
  scenario.log_grid = std::move(log_grid);

  if (doc.contains("ladder")) {
    const json& ladder = doc["ladder"];
    LadderSpec spec;
    spec.mode = ladder.value("mode", std::string("fixed"));
    if (spec.mode == "fixed") {
      spec.levels = parse_levels(need(ladder, "levels", "ladder.levels"), "ladder.levels");
    } else if (spec.mode == "generative") {
      spec.selector = need(ladder, "selector", "ladder.selector").get<std::string>();
      for (const auto& [value, levels] : need(ladder, "variants", "ladder.variants").items()) {
        spec.variants[value] = parse_levels(levels, "ladder.variants." + value);
      }
    } else {
      fail("ladder.mode", "expected 'fixed' or 'generative'");
    }
    scenario.ladder_spec = std::move(spec);
  }

  if (doc.contains("sellers")) {
    for (const auto& s : doc["sellers"]) {
      SellerSpec spec;
      spec.name = need(s, "name", "sellers").get<std::string>();
      for (const auto& v : need(s, "variables", "sellers")) {
        spec.variables.push_back(v.get<std::string>());
      }
      spec.level = s.value("level", 0);
      spec.rule = s.value("rule", std::string("fixed"));
      spec.price = s.value("price", 0.0);
      spec.lambda = s.value("lambda", 0.5);
      scenario.sellers.push_back(std::move(spec));
    }
  }

  if (doc.contains("oversight")) {
    const json& o = doc["oversight"];
    OversightSpec spec;
    spec.knowledge = need(o, "knowledge", "oversight").get<std::string>();
    spec.depth_cap = o.value("depth_cap", 16);
    spec.history_budget = o.value("history_budget", std::uint64_t{200'000});
    for (const auto& m : need(o, "moves", "oversight.moves")) {
      LadderOfferSpec move;
      move.variable = need(m, "variable", "oversight.moves").get<std::string>();
      move.price = m.value("price", 0.0);
      spec.moves.push_back(std::move(move));
    }
    scenario.oversight = std::move(spec);
  }

  if (doc.contains("checks")) {
    for (const auto& c : doc["checks"]) {
      FixtureCheck check;
      check.kind = need(c, "check", "checks").get<std::string>();
      if (c.contains("evidence")) check.evidence = parse_string_map(c["evidence"], "checks");
      if (c.contains("event")) check.event = parse_string_map(c["event"], "checks");
      check.action = c.value("action", std::string());
      if (c.contains("equals")) {
        const json& eq = c["equals"];
        check.equals = eq.is_string() ? eq.get<std::string>() : eq.dump();
      }
      check.tol = c.value("tol", 0.0);
      scenario.checks.push_back(std::move(check));
    }
  }

  if (doc.contains("params")) {
    const json& p = doc["params"];
    scenario.params.depth = p.value("depth", 1);
    scenario.params.seed = p.value("seed", std::uint64_t{0});
    scenario.params.protocol_budget = p.value("protocol_budget", std::uint64_t{1'000'000});
    if (p.contains("buyer_budget")) scenario.params.buyer_budget = p["buyer_budget"].get<double>();
  }

  // Referenced names must resolve; building the derived objects checks them.
  try {
    if (scenario.ladder_spec) scenario.build_ladder();
    scenario.build_sellers();
    if (scenario.oversight) scenario.build_oversight();
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("scenario: ") + e.what());
  }

  run_fixture_checks(scenario);
  return scenario;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open scenario file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str());
}

std::string serialize_scenario(const Scenario& scenario) {
  ordered_json doc;
  doc["name"] = scenario.name;
  ordered_json space;
  space["outcomes"] = scenario.space.outcomes();
  std::vector<std::string> prior;
  for (std::size_t i = 0; i < scenario.space.size(); ++i) {
    prior.push_back(scenario.space.mass(i).str());
  }
  space["prior"] = prior;
  doc["space"] = std::move(space);
  doc["true_outcome"] = scenario.space.outcome(scenario.true_outcome);

  ordered_json vars = ordered_json::object();
  for (const auto& var : scenario.variables) {
    vars[var.name()] = var.values();
  }
  doc["variables"] = std::move(vars);

  ordered_json decision;
  if (scenario.log_score) {
    ordered_json ls;
    ls["event"] = scenario.log_event;
    std::vector<std::string> grid;
    for (const auto& g : scenario.log_grid) grid.push_back(g.str());
    ls["grid"] = grid;
    decision["log_score"] = std::move(ls);
  } else {
    decision["actions"] = scenario.problem.actions;
    decision["utility"] = scenario.problem.utility;
  }
  doc["decision"] = std::move(decision);

  auto levels_json = [](const std::vector<std::vector<LadderOfferSpec>>& levels) {
    ordered_json out = ordered_json::array();
    for (const auto& level : levels) {
      ordered_json level_json = ordered_json::array();
      for (const auto& offer : level) {
        ordered_json o;
        o["variable"] = offer.variable;
        o["price"] = offer.price;
        level_json.push_back(std::move(o));
      }
      out.push_back(std::move(level_json));
    }
    return out;
  };

  if (scenario.ladder_spec) {
    ordered_json ladder;
    ladder["mode"] = scenario.ladder_spec->mode;
    if (scenario.ladder_spec->mode == "fixed") {
      ladder["levels"] = levels_json(scenario.ladder_spec->levels);
    } else {
      ladder["selector"] = scenario.ladder_spec->selector;
      ordered_json variants = ordered_json::object();
      for (const auto& [value, levels] : scenario.ladder_spec->variants) {
        variants[value] = levels_json(levels);
      }
      ladder["variants"] = std::move(variants);
    }
    doc["ladder"] = std::move(ladder);
  }

  if (!scenario.sellers.empty()) {
    ordered_json sellers = ordered_json::array();
    for (const auto& s : scenario.sellers) {
      ordered_json seller;
      seller["name"] = s.name;
      seller["variables"] = s.variables;
      seller["level"] = s.level;
      seller["rule"] = s.rule;
      if (s.rule == "fixed") {
        seller["price"] = s.price;
      } else {
        seller["lambda"] = s.lambda;
      }
      sellers.push_back(std::move(seller));
    }
    doc["sellers"] = std::move(sellers);
  }

  if (scenario.oversight) {
    ordered_json o;
    o["knowledge"] = scenario.oversight->knowledge;
    o["depth_cap"] = scenario.oversight->depth_cap;
    o["history_budget"] = scenario.oversight->history_budget;
    ordered_json moves = ordered_json::array();
    for (const auto& m : scenario.oversight->moves) {
      ordered_json move;
      move["variable"] = m.variable;
      move["price"] = m.price;
      moves.push_back(std::move(move));
    }
    o["moves"] = std::move(moves);
    doc["oversight"] = std::move(o);
  }

  if (!scenario.checks.empty()) {
    ordered_json checks = ordered_json::array();
    for (const auto& c : scenario.checks) {
      ordered_json check;
      check["check"] = c.kind;
      if (!c.evidence.empty()) check["evidence"] = c.evidence;
      if (!c.event.empty()) check["event"] = c.event;
      if (!c.action.empty()) check["action"] = c.action;
      if (!c.equals.empty()) check["equals"] = c.equals;
      if (c.tol != 0.0) check["tol"] = c.tol;
      checks.push_back(std::move(check));
    }
    doc["checks"] = std::move(checks);
  }

  ordered_json params;
  params["depth"] = scenario.params.depth;
  params["seed"] = scenario.params.seed;
  params["protocol_budget"] = scenario.params.protocol_budget;
  if (scenario.params.buyer_budget) params["buyer_budget"] = *scenario.params.buyer_budget;
  doc["params"] = std::move(params);

  return doc.dump(2) + "\n";
}

void save_scenario(const Scenario& scenario, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write scenario file '" + path + "'");
  out << serialize_scenario(scenario);
}

void run_fixture_checks(const Scenario& scenario) {
  for (const auto& check : scenario.checks) {
    if (check.kind == "probability") {
      Rational actual = probability(scenario.space, scenario.evidence_from(check.evidence));
      Rational expected = Rational::parse(check.equals);
      if (actual != expected) {
        throw FixtureViolation("probability check " + Evidence().str() + " failed: expected " +
                               expected.str() + ", got " + actual.str());
      }
    } else if (check.kind == "conditional_probability") {
      SampleSpace posterior = condition(scenario.space, scenario.evidence_from(check.evidence));
      Rational actual = probability(posterior, scenario.evidence_from(check.event));
      Rational expected = Rational::parse(check.equals);
      if (actual != expected) {
        throw FixtureViolation("conditional_probability check failed: expected " +
                               expected.str() + ", got " + actual.str());
      }
    } else if (check.kind == "expected_utility") {
      int action = scenario.problem.action_index(check.action);
      if (action < 0) throw FixtureViolation("check names unknown action '" + check.action + "'");
      SampleSpace posterior = condition(scenario.space, scenario.evidence_from(check.evidence));
      double actual = expectation(
          posterior, [&](std::size_t w) { return scenario.problem.u(w, action); });
      double expected = std::stod(check.equals);
      if (std::abs(actual - expected) > check.tol) {
        throw FixtureViolation("expected_utility check for action '" + check.action +
                               "' failed: expected " + std::to_string(expected) + ", got " +
                               std::to_string(actual));
      }
    } else {
      throw FixtureViolation("unknown check kind '" + check.kind + "'");
    }
  }
}

}  // namespace infoval
