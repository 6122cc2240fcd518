#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "infoval/rational.hpp"

namespace infoval {

/// Bit mask over outcome indices. Spaces are capped at 64 outcomes so that
/// events, conditioning sets and solver memo keys all fit in one word.
using OutcomeMask = std::uint64_t;

inline constexpr std::size_t kMaxOutcomes = 64;

/// A finite outcome set with an exact-rational prior. Immutable once built.
class SampleSpace {
 public:
  SampleSpace(std::vector<std::string> outcomes, std::vector<Rational> prior);

  std::size_t size() const { return outcomes_.size(); }
  const std::vector<std::string>& outcomes() const { return outcomes_; }
  const std::string& outcome(std::size_t i) const { return outcomes_[i]; }
  const Rational& mass(std::size_t i) const { return prior_[i]; }
  const std::vector<Rational>& prior() const { return prior_; }

  /// Index of an outcome label, or -1 when absent.
  int index_of(const std::string& label) const;

  /// Mask of outcomes with strictly positive mass.
  OutcomeMask support() const;

  /// Total mass of an outcome mask.
  Rational mass_of(OutcomeMask mask) const;

  /// Posterior given an event mask: same outcomes, renormalized masses, zero
  /// outside the event. Throws EvidenceImpossible when the event mass is zero.
  SampleSpace conditioned_on(OutcomeMask mask) const;

 private:
  std::vector<std::string> outcomes_;
  std::vector<Rational> prior_;
};

/// A random variable as a total labeling of outcomes; the induced partition
/// of the space is the information it carries.
class RandomVariable {
 public:
  RandomVariable() = default;
  RandomVariable(std::string name, std::vector<std::string> values);

  const std::string& name() const { return name_; }
  const std::string& value_at(std::size_t outcome) const { return values_[outcome]; }
  const std::vector<std::string>& values() const { return values_; }
  std::size_t domain_size() const { return values_.size(); }

  /// Sorted distinct values this variable takes.
  std::vector<std::string> range() const;

  /// Event {variable == value}.
  OutcomeMask event(const std::string& value) const;

  /// True when this variable never distinguishes two outcomes.
  bool is_constant() const;

  /// True when conditioning on this variable can never split a block of
  /// `finer` (i.e. this partition is a coarsening of `finer`).
  bool coarsens(const RandomVariable& finer) const;

  friend bool operator==(const RandomVariable& a, const RandomVariable& b) {
    return a.name_ == b.name_ && a.values_ == b.values_;
  }

 private:
  std::string name_;
  std::vector<std::string> values_;
};

/// Joint variable of several variables; value labels are the member labels
/// joined with '|' in member order.
RandomVariable join_variables(const std::vector<RandomVariable>& members, const std::string& name);

/// A conjunction of variable=value assignments: the conditioning sets
/// {I = i} and their unions across purchased goods. At most one value per
/// variable name; re-adding an identical assignment is a no-op.
class Evidence {
 public:
  Evidence() = default;

  /// Returns this evidence extended with one assignment. Throws
  /// std::invalid_argument if the variable already carries a different value.
  Evidence with(const RandomVariable& variable, std::string value) const;

  bool empty() const { return assignments_.empty(); }
  std::size_t size() const { return assignments_.size(); }
  const std::vector<std::pair<RandomVariable, std::string>>& assignments() const {
    return assignments_;
  }

  /// Conjunction event over a space. Empty evidence is the whole space.
  OutcomeMask event(const SampleSpace& space) const;

  std::string str() const;

 private:
  std::vector<std::pair<RandomVariable, std::string>> assignments_;  // sorted by name
};

/// An information good: a random variable, its realized value, and a price.
struct InfoGood {
  RandomVariable variable;
  std::string realized_value;
  double price = 0.0;

  /// The null good: constant variable, value "*", price 0. Declining to buy
  /// is modelled as buying this.
  static InfoGood null_good(const SampleSpace& space);

  bool is_null() const { return variable.is_constant() && price == 0.0; }

  /// Event {variable == realized_value}.
  OutcomeMask event() const { return variable.event(realized_value); }

  /// Good realized from a designated true outcome.
  static InfoGood from_outcome(RandomVariable variable, std::size_t true_outcome, double price);

  friend bool operator==(const InfoGood& a, const InfoGood& b) {
    return a.variable == b.variable && a.realized_value == b.realized_value && a.price == b.price;
  }
};

/// Exact prior mass of the evidence event; zero for contradictory evidence.
Rational probability(const SampleSpace& space, const Evidence& evidence);

/// Posterior space given evidence. Throws EvidenceImpossible on zero mass.
SampleSpace condition(const SampleSpace& space, const Evidence& evidence);

/// Expectation of f under the space's (possibly posterior) masses.
double expectation(const SampleSpace& space, const std::function<double(std::size_t)>& f);

/// Combines goods into one: joint variable, tuple of realized values, summed
/// prices. Identical goods are deduplicated before summing, null goods are
/// absorbed, and a zero-mass joint event throws InconsistentGoods.
InfoGood join(const SampleSpace& space, std::vector<InfoGood> goods);

}  // namespace infoval
