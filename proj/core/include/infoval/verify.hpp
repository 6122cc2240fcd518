#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "infoval/admissible.hpp"
#include "infoval/oversight.hpp"

namespace infoval {

/// Checks, over seeded random instances, that the successive protocol's
/// expected instrumental gain is nonnegative at every purchase level,
/// including finite depths. Throws ViolationFound with the offending
/// scenario serialized.
PropertyReport verify_gain_from_inspection(std::uint64_t seed, int trials, int workers = 1);

struct SuperiorityInstanceRow {
  std::uint64_t seed = 0;
  std::uint64_t protocols = 0;
  double recursive_value = 0.0;
  double best_admissible_value = 0.0;
  double margin = 0.0;
  double chain_slack = 0.0;
};

struct SuperioritySuiteReport {
  int instances = 0;
  int violations = 0;
  std::uint64_t total_protocols = 0;
  double min_margin = 0.0;
  double min_chain_slack = 0.0;
  std::vector<SuperiorityInstanceRow> rows;
};

/// Brute-force check of ex-ante superiority over every admissible protocol
/// on seeded random instances (mix of fixed and generative ladders). Throws
/// ViolationFound with the first offending scenario.
SuperioritySuiteReport verify_superiority_suite(std::uint64_t seed, int instances,
                                                std::uint64_t protocol_budget = 1'000'000,
                                                int workers = 1);

struct CharacterizationRow {
  std::uint64_t seed = 0;
  bool first_inextensible = false;
  bool later_all_null = false;
  bool max_expost = false;
  std::string first_move;
};

struct CharacterizationSuiteReport {
  int instances = 0;
  int violations = 0;
  std::vector<CharacterizationRow> rows;
  std::vector<std::string> counterexamples;  // serialized scenarios, one per failure
};

/// Equilibrium characterization over seeded random oversight instances:
/// pass/fail per bullet, counterexample fixtures for any failure.
CharacterizationSuiteReport verify_characterization_suite(std::uint64_t seed, int instances,
                                                          int workers = 1);

struct EquivalenceReport {
  int instances = 0;
  int mismatches = 0;
  std::string first_mismatch;  // serialized scenario
};

/// run_rip against solve_recursive on the induced ladder: exact plan
/// equality on every generated market scenario.
EquivalenceReport verify_harness_equivalence(std::uint64_t seed, int instances, int workers = 1);

struct MonotonicityReport {
  int instances = 0;
  int violations = 0;
  double min_gap = 0.0;
  std::string first_violation;
};

/// Expected buyer utility of the recursive run is nondecreasing in depth.
MonotonicityReport verify_depth_monotonicity(std::uint64_t seed, int instances, int workers = 1);

}  // namespace infoval
