#include "infoval/prob.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "infoval/errors.hpp"

namespace infoval {

SampleSpace::SampleSpace(std::vector<std::string> outcomes, std::vector<Rational> prior)
    : outcomes_(std::move(outcomes)), prior_(std::move(prior)) {
  if (outcomes_.empty()) throw std::invalid_argument("sample space needs at least one outcome");
  if (outcomes_.size() > kMaxOutcomes) {
    throw std::invalid_argument("sample space exceeds " + std::to_string(kMaxOutcomes) +
                                " outcomes");
  }
  if (prior_.size() != outcomes_.size()) {
    throw std::invalid_argument("prior size does not match outcome count");
  }
  std::set<std::string> seen;
  for (const auto& label : outcomes_) {
    if (!seen.insert(label).second) {
      throw std::invalid_argument("duplicate outcome label '" + label + "'");
    }
  }
  Rational total(0);
  for (const auto& p : prior_) {
    if (p.negative()) throw std::invalid_argument("negative prior mass");
    total += p;
  }
  if (total != Rational(1)) {
    throw std::invalid_argument("prior masses sum to " + total.str() + ", expected 1");
  }
}

int SampleSpace::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < outcomes_.size(); ++i) {
    if (outcomes_[i] == label) return static_cast<int>(i);
  }
  return -1;
}

OutcomeMask SampleSpace::support() const {
  OutcomeMask mask = 0;
  for (std::size_t i = 0; i < prior_.size(); ++i) {
    if (!prior_[i].is_zero()) mask |= OutcomeMask(1) << i;
  }
  return mask;
}

Rational SampleSpace::mass_of(OutcomeMask mask) const {
  Rational total(0);
  for (std::size_t i = 0; i < prior_.size(); ++i) {
    if (mask & (OutcomeMask(1) << i)) total += prior_[i];
  }
  return total;
}

SampleSpace SampleSpace::conditioned_on(OutcomeMask mask) const {
  Rational total = mass_of(mask);
  if (total.is_zero()) throw EvidenceImpossible("conditioning event has zero prior mass");
  std::vector<Rational> posterior(prior_.size(), Rational(0));
  for (std::size_t i = 0; i < prior_.size(); ++i) {
    if (mask & (OutcomeMask(1) << i)) posterior[i] = prior_[i] / total;
  }
  return SampleSpace(outcomes_, std::move(posterior));
}

RandomVariable::RandomVariable(std::string name, std::vector<std::string> values)
    : name_(std::move(name)), values_(std::move(values)) {
  if (values_.empty()) throw std::invalid_argument("random variable with empty valuation");
}

std::vector<std::string> RandomVariable::range() const {
  std::vector<std::string> r(values_);
  std::sort(r.begin(), r.end());
  r.erase(std::unique(r.begin(), r.end()), r.end());
  return r;
}

OutcomeMask RandomVariable::event(const std::string& value) const {
  OutcomeMask mask = 0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] == value) mask |= OutcomeMask(1) << i;
  }
  return mask;
}

bool RandomVariable::is_constant() const {
  for (std::size_t i = 1; i < values_.size(); ++i) {
    if (values_[i] != values_[0]) return false;
  }
  return true;
}

bool RandomVariable::coarsens(const RandomVariable& finer) const {
  if (values_.size() != finer.values_.size()) return false;
  // Same value of `finer` must imply same value of this.
  for (std::size_t i = 0; i < values_.size(); ++i) {
    for (std::size_t j = i + 1; j < values_.size(); ++j) {
      if (finer.values_[i] == finer.values_[j] && values_[i] != values_[j]) return false;
    }
  }
  return true;
}

RandomVariable join_variables(const std::vector<RandomVariable>& members,
                              const std::string& name) {
  if (members.empty()) throw std::invalid_argument("join of zero variables");
  std::size_t n = members.front().domain_size();
  std::vector<std::string> values(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::string v;
    for (std::size_t m = 0; m < members.size(); ++m) {
      if (members[m].domain_size() != n) {
        throw std::invalid_argument("joined variables live on different spaces");
      }
      if (m > 0) v += '|';
      v += members[m].value_at(i);
    }
    values[i] = v;
  }
  return RandomVariable(name, std::move(values));
}

Evidence Evidence::with(const RandomVariable& variable, std::string value) const {
  Evidence out = *this;
  for (auto& [var, val] : out.assignments_) {
    if (var.name() == variable.name()) {
      if (val == value && var == variable) return out;
      throw std::invalid_argument("conflicting assignment for variable '" + variable.name() +
                                  "'");
    }
  }
  out.assignments_.emplace_back(variable, std::move(value));
  std::sort(out.assignments_.begin(), out.assignments_.end(),
            [](const auto& a, const auto& b) { return a.first.name() < b.first.name(); });
  return out;
}

OutcomeMask Evidence::event(const SampleSpace& space) const {
  OutcomeMask mask = ~OutcomeMask(0);
  if (space.size() < kMaxOutcomes) mask = (OutcomeMask(1) << space.size()) - 1;
  for (const auto& [var, val] : assignments_) {
    if (var.domain_size() != space.size()) {
      throw std::invalid_argument("evidence variable '" + var.name() +
                                  "' lives on a different space");
    }
    mask &= var.event(val);
  }
  return mask;
}

std::string Evidence::str() const {
  if (assignments_.empty()) return "{}";
  std::string out = "{";
  for (std::size_t i = 0; i < assignments_.size(); ++i) {
    if (i > 0) out += ", ";
    out += assignments_[i].first.name() + "=" + assignments_[i].second;
  }
  return out + "}";
}

InfoGood InfoGood::null_good(const SampleSpace& space) {
  return InfoGood{RandomVariable("null", std::vector<std::string>(space.size(), "*")), "*", 0.0};
}

InfoGood InfoGood::from_outcome(RandomVariable variable, std::size_t true_outcome, double price) {
  std::string value = variable.value_at(true_outcome);
  return InfoGood{std::move(variable), std::move(value), price};
}

Rational probability(const SampleSpace& space, const Evidence& evidence) {
  return space.mass_of(evidence.event(space));
}

SampleSpace condition(const SampleSpace& space, const Evidence& evidence) {
  return space.conditioned_on(evidence.event(space));
}

double expectation(const SampleSpace& space, const std::function<double(std::size_t)>& f) {
  double total = 0.0;
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (!space.mass(i).is_zero()) total += space.mass(i).to_double() * f(i);
  }
  return total;
}

InfoGood join(const SampleSpace& space, std::vector<InfoGood> goods) {
  // Null members carry no information and no price.
  goods.erase(std::remove_if(goods.begin(), goods.end(),
                             [](const InfoGood& g) { return g.is_null(); }),
              goods.end());
  if (goods.empty()) return InfoGood::null_good(space);

  std::sort(goods.begin(), goods.end(), [](const InfoGood& a, const InfoGood& b) {
    return a.variable.name() < b.variable.name();
  });
  // You cannot buy the same good twice in one bundle.
  goods.erase(std::unique(goods.begin(), goods.end()), goods.end());
  if (goods.size() == 1) return goods.front();

  std::vector<RandomVariable> vars;
  std::string name = "(";
  std::string value;
  double price = 0.0;
  OutcomeMask event = ~OutcomeMask(0);
  for (std::size_t i = 0; i < goods.size(); ++i) {
    vars.push_back(goods[i].variable);
    if (i > 0) {
      name += ",";
      value += "|";
    }
    name += goods[i].variable.name();
    value += goods[i].realized_value;
    price += goods[i].price;
    event &= goods[i].event();
  }
  name += ")";
  if (space.mass_of(event & space.support()).is_zero()) {
    throw InconsistentGoods("joint event of combined goods has zero prior mass");
  }
  return InfoGood{join_variables(vars, name), value, price};
}

}  // namespace infoval
