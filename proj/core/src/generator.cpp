#include "infoval/generator.hpp"

#include <algorithm>
#include <numeric>

namespace infoval {

int ScenarioGenerator::uniform_int(int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng_);
}

double ScenarioGenerator::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng_);
}

bool ScenarioGenerator::chance(double p) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < p;
}

SampleSpace ScenarioGenerator::gen_space(int min_outcomes, int max_outcomes) {
  int n = uniform_int(min_outcomes, max_outcomes);
  std::vector<long long> weights(n);
  long long total = 0;
  for (auto& w : weights) {
    w = uniform_int(1, 20);
    total += w;
  }
  std::vector<std::string> outcomes;
  std::vector<Rational> prior;
  for (int i = 0; i < n; ++i) {
    outcomes.push_back("w" + std::to_string(i));
    prior.emplace_back(weights[i], total);
  }
  return SampleSpace(std::move(outcomes), std::move(prior));
}

DecisionProblem ScenarioGenerator::gen_problem(const SampleSpace& space, int min_actions,
                                               int max_actions) {
  int n_actions = uniform_int(min_actions, max_actions);
  std::vector<std::string> actions;
  for (int a = 0; a < n_actions; ++a) actions.push_back("a" + std::to_string(a));
  std::vector<std::vector<double>> utility(space.size(), std::vector<double>(n_actions));
  for (auto& row : utility) {
    for (auto& u : row) u = uniform(-1.0, 1.0);
  }
  return DecisionProblem(std::move(actions), std::move(utility));
}

RandomVariable ScenarioGenerator::gen_variable(const SampleSpace& space, const std::string& name,
                                               int max_blocks) {
  int blocks = uniform_int(2, max_blocks);
  std::vector<std::string> values(space.size());
  // A constant draw is legal but carries no information; redraw a few times
  // so offered variables usually split the space.
  for (int attempt = 0; attempt < 4; ++attempt) {
    for (auto& v : values) v = "v" + std::to_string(uniform_int(0, blocks - 1));
    bool constant = true;
    for (const auto& v : values) constant = constant && v == values.front();
    if (!constant) break;
  }
  return RandomVariable(name, std::move(values));
}

int ScenarioGenerator::gen_true_outcome(const SampleSpace& space) {
  std::vector<int> candidates;
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (!space.mass(i).is_zero()) candidates.push_back(static_cast<int>(i));
  }
  return candidates[uniform_int(0, static_cast<int>(candidates.size()) - 1)];
}

Scenario ScenarioGenerator::gen_voi_scenario() {
  SampleSpace space = gen_space();
  DecisionProblem problem = gen_problem(space);
  std::vector<RandomVariable> variables;
  variables.push_back(gen_variable(space, "I0"));
  int true_outcome = gen_true_outcome(space);
  Scenario scenario("random-voi", std::move(space), true_outcome, std::move(variables),
                    std::move(problem));
  return scenario;
}

Scenario ScenarioGenerator::gen_inspect_scenario(int max_depth, int max_offers_per_level,
                                                 bool allow_generative, int max_actions) {
  SampleSpace space = gen_space(2, 6);
  int depth = uniform_int(1, max_depth);
  // Wide two-offer levels with three actions blow past the protocol budget
  // at depth 2; keep those combinations apart.
  int n_actions = depth >= 2 ? 2 : uniform_int(2, max_actions);
  DecisionProblem problem = gen_problem(space, n_actions, n_actions);

  std::vector<RandomVariable> variables;
  std::vector<std::vector<LadderOfferSpec>> levels;
  int var_id = 0;
  for (int l = 0; l < depth; ++l) {
    // Empty upper levels degenerate to a shallower game; keep them rare.
    int lo = l == 0 || chance(0.8) ? 1 : 0;
    int n_offers = uniform_int(lo, max_offers_per_level);
    std::vector<LadderOfferSpec> level;
    for (int k = 0; k < n_offers; ++k) {
      std::string name = "I" + std::to_string(var_id++);
      variables.push_back(gen_variable(space, name, 2));
      LadderOfferSpec offer;
      offer.variable = name;
      offer.price = chance(0.5) ? 0.0 : uniform(0.01, 0.4);
      level.push_back(std::move(offer));
    }
    levels.push_back(std::move(level));
  }

  LadderSpec spec;
  bool generative = allow_generative && chance(0.25);
  if (generative) {
    // Two variants differing in one offer's price, selected by a fresh
    // binary variable: observing the offers is then genuine evidence.
    std::string selector = "G";
    variables.push_back(gen_variable(space, selector, 2));
    auto alt = levels;
    bool changed = false;
    for (auto& level : alt) {
      for (auto& offer : level) {
        offer.price = chance(0.5) ? 0.0 : uniform(0.01, 0.4);
        changed = true;
        break;
      }
      if (changed) break;
    }
    spec.mode = "generative";
    spec.selector = selector;
    spec.variants["v0"] = levels;
    spec.variants["v1"] = std::move(alt);
  } else {
    spec.mode = "fixed";
    spec.levels = std::move(levels);
  }

  int true_outcome = gen_true_outcome(space);
  Scenario scenario("random-inspect", std::move(space), true_outcome, std::move(variables),
                    std::move(problem));
  scenario.ladder_spec = std::move(spec);
  scenario.params.depth = depth;
  return scenario;
}

Scenario ScenarioGenerator::gen_oversight_scenario() {
  SampleSpace space = gen_space(3, 6);
  DecisionProblem problem = gen_problem(space, 2, 3);
  std::vector<RandomVariable> variables;

  // Knowledge is the identity partition: everything is knowable.
  std::vector<std::string> id_values;
  for (std::size_t i = 0; i < space.size(); ++i) id_values.push_back("k" + std::to_string(i));
  variables.emplace_back("K", std::move(id_values));

  OversightSpec spec;
  spec.knowledge = "K";
  spec.depth_cap = 8;
  int n_moves = uniform_int(2, 3);
  for (int m = 0; m < n_moves; ++m) {
    std::string name = "I" + std::to_string(m);
    variables.push_back(gen_variable(space, name, 3));
    LadderOfferSpec move;
    move.variable = name;
    move.price = chance(0.7) ? 0.0 : uniform(0.01, 0.3);
    spec.moves.push_back(std::move(move));
  }

  int true_outcome = gen_true_outcome(space);
  Scenario scenario("random-oversight", std::move(space), true_outcome, std::move(variables),
                    std::move(problem));
  scenario.oversight = std::move(spec);
  return scenario;
}

Scenario ScenarioGenerator::gen_market_scenario(int max_depth) {
  SampleSpace space = gen_space(2, 6);
  DecisionProblem problem = gen_problem(space, 2, 3);
  int depth = uniform_int(1, max_depth);

  std::vector<RandomVariable> variables;
  std::vector<SellerSpec> sellers;
  int var_id = 0;
  for (int level = 0; level < depth; ++level) {
    int n_sellers = uniform_int(level == 0 ? 1 : 0, 2);
    for (int s = 0; s < n_sellers; ++s) {
      std::string var_name = "I" + std::to_string(var_id++);
      variables.push_back(gen_variable(space, var_name, 2));
      SellerSpec seller;
      seller.name = "s" + std::to_string(level) + "_" + std::to_string(s);
      seller.variables.push_back(var_name);
      seller.level = level;
      if (chance(0.5)) {
        seller.rule = "fixed";
        seller.price = chance(0.5) ? 0.0 : uniform(0.01, 0.3);
      } else {
        seller.rule = "voi-fraction";
        seller.lambda = uniform(0.2, 1.0);
      }
      sellers.push_back(std::move(seller));
    }
  }

  int true_outcome = gen_true_outcome(space);
  Scenario scenario("random-market", std::move(space), true_outcome, std::move(variables),
                    std::move(problem));
  scenario.sellers = std::move(sellers);
  scenario.params.depth = depth;
  return scenario;
}

std::uint64_t trial_seed(std::uint64_t suite_seed, int trial) {
  // splitmix64 step keyed by suite seed and trial index
  std::uint64_t z = suite_seed + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(trial) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace infoval
