#pragma once

#include <cstdint>
#include <random>

#include "infoval/scenario.hpp"

namespace infoval {

/// Deterministic scenario generation. Every draw is a pure function of the
/// seed; suites derive per-trial seeds so trials are independent of worker
/// count and order.
class ScenarioGenerator {
 public:
  explicit ScenarioGenerator(std::uint64_t seed) : rng_(seed) {}

  int uniform_int(int lo, int hi);        // inclusive
  double uniform(double lo, double hi);
  bool chance(double p);

  /// Exact-rational prior from small integer weights.
  SampleSpace gen_space(int min_outcomes = 2, int max_outcomes = 8);
  DecisionProblem gen_problem(const SampleSpace& space, int min_actions = 2,
                              int max_actions = 4);
  /// Random partition with at most max_blocks value classes.
  RandomVariable gen_variable(const SampleSpace& space, const std::string& name,
                              int max_blocks = 3);
  int gen_true_outcome(const SampleSpace& space);

  /// Space + problem + one variable: the lemma-1 trial shape.
  Scenario gen_voi_scenario();

  /// Space + problem + a ladder (optionally generative with two variants).
  Scenario gen_inspect_scenario(int max_depth = 2, int max_offers_per_level = 2,
                                bool allow_generative = false, int max_actions = 3);

  /// Small oversight instance: knowledge variable plus 2-3 base moves.
  Scenario gen_oversight_scenario();

  /// Sellers spread over recursion levels, mixed pricing rules.
  Scenario gen_market_scenario(int max_depth = 3);

 private:
  std::mt19937_64 rng_;
};

/// Per-trial derived seed, stable across workers.
std::uint64_t trial_seed(std::uint64_t suite_seed, int trial);

}  // namespace infoval
