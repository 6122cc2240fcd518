#include "infoval/rational.hpp"

#include <charconv>
#include <limits>

namespace infoval {

namespace {

long long parse_ll(std::string_view text) {
  long long value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw std::invalid_argument("bad integer in rational: '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

void Rational::assign(long long num, long long den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  long long g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  num_ = num;
  den_ = den;
}

Rational Rational::from_i128(i128 num, i128 den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  i128 a = num < 0 ? -num : num;
  i128 b = den;
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    num /= a;
    den /= a;
  }
  constexpr i128 kMax = std::numeric_limits<long long>::max();
  constexpr i128 kMin = std::numeric_limits<long long>::min();
  if (num > kMax || num < kMin || den > kMax) {
    throw std::overflow_error("rational overflow");
  }
  Rational r;
  r.num_ = static_cast<long long>(num);
  r.den_ = static_cast<long long>(den);
  return r;
}

Rational Rational::parse(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty rational");
  auto slash = text.find('/');
  if (slash != std::string_view::npos) {
    return Rational(parse_ll(text.substr(0, slash)), parse_ll(text.substr(slash + 1)));
  }
  auto dot = text.find('.');
  if (dot != std::string_view::npos) {
    // "0.08" -> 8/100. Exact decimal, no float round-trip.
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    if (frac.empty() || frac.size() > 18) {
      throw std::invalid_argument("bad decimal in rational: '" + std::string(text) + "'");
    }
    bool neg = !whole.empty() && whole.front() == '-';
    if (neg) whole.remove_prefix(1);
    long long w = whole.empty() ? 0 : parse_ll(whole);
    long long f = parse_ll(frac);
    if (f < 0) throw std::invalid_argument("bad decimal in rational: '" + std::string(text) + "'");
    long long scale = 1;
    for (size_t i = 0; i < frac.size(); ++i) scale *= 10;
    Rational r = Rational(w, 1) + Rational(f, scale);
    return neg ? Rational(0) - r : r;
  }
  return Rational(parse_ll(text), 1);
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

}  // namespace infoval
