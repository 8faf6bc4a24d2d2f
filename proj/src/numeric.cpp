#include "seqlab/numeric.hpp"

#include <cstddef>
#include <stdexcept>

namespace seqlab {

Rational make_rational(Integer num, Integer den) {
  if (den == 0) throw std::invalid_argument("rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  return Rational(num, den);  // cpp_rational reduces on construction
}

Integer ceil_div(const Integer& a, const Integer& b) {
  if (b <= 0) throw std::invalid_argument("ceil_div: divisor must be positive");
  Integer q = a / b;
  if (a % b != 0 && a > 0) ++q;
  return q;
}

Integer floor_div(const Integer& a, const Integer& b) {
  if (b <= 0) throw std::invalid_argument("floor_div: divisor must be positive");
  Integer q = a / b;
  if (a % b != 0 && a < 0) --q;
  return q;
}

Integer ceil_rational(const Rational& q) {
  return ceil_div(numerator(q), denominator(q));
}

Integer pow2(unsigned long e) { return Integer(1) << e; }

std::size_t to_size(const Integer& n) { return n.convert_to<std::size_t>(); }

Rational abs_rational(const Rational& q) { return q < 0 ? Rational(-q) : q; }

std::string to_string(const Integer& n) { return n.str(); }

std::string to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

namespace {

bool is_decimal(const std::string& s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-') ? 1 : 0;
  if (i >= s.size()) return false;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  return true;
}

}  // namespace

Integer parse_integer(const std::string& text) {
  if (!is_decimal(text)) {
    throw std::invalid_argument("not a decimal integer: '" + text + "'");
  }
  return Integer(text);
}

Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) {
    return Rational(parse_integer(text));
  }
  const Integer num = parse_integer(text.substr(0, slash));
  const Integer den = parse_integer(text.substr(slash + 1));
  if (den <= 0) {
    throw std::invalid_argument("denominator must be positive: '" + text + "'");
  }
  return Rational(num, den);
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

}  // namespace seqlab
