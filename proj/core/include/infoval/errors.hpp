#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace infoval {

/// Conditioning event has zero prior mass.
class EvidenceImpossible : public std::runtime_error {
 public:
  explicit EvidenceImpossible(const std::string& what) : std::runtime_error(what) {}
};

/// Goods whose realized values are jointly impossible (zero-mass joint event).
class InconsistentGoods : public std::runtime_error {
 public:
  explicit InconsistentGoods(const std::string& what) : std::runtime_error(what) {}
};

/// An exhaustive enumeration would exceed its configured budget.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, std::uint64_t computed_count)
      : std::runtime_error(what), count(computed_count) {}
  std::uint64_t count;
};

/// A verification suite found a counterexample. Carries the offending
/// scenario serialized as JSON so the failure is reproducible standalone.
class ViolationFound : public std::runtime_error {
 public:
  ViolationFound(const std::string& what, std::string scenario)
      : std::runtime_error(what), scenario_json(std::move(scenario)) {}
  std::string scenario_json;
};

/// Scenario file could not be parsed.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// A scenario's embedded fixture assertion failed at load time.
class FixtureViolation : public std::runtime_error {
 public:
  explicit FixtureViolation(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace infoval
