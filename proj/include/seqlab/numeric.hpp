#ifndef SEQLAB_NUMERIC_HPP
#define SEQLAB_NUMERIC_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace seqlab {

// All exactness-critical arithmetic runs on arbitrary-precision integers and
// reduced fractions. Floating point appears only in the zeta transform output
// and in report rendering.
using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// 1-based position in a sequence. Operations that require k >= 1 (or a window
// start m >= 0) validate at the call boundary; positions routinely exceed
// 2^64, so this is never a machine word.
using Index = Integer;

/// Exact rational from numerator/denominator with sign canonicalization.
Rational make_rational(Integer num, Integer den);

/// ceil(a / b) for b > 0.
Integer ceil_div(const Integer& a, const Integer& b);

/// floor(a / b) for b > 0.
Integer floor_div(const Integer& a, const Integer& b);

/// Smallest integer >= q.
Integer ceil_rational(const Rational& q);

/// 2^e for e >= 0.
Integer pow2(unsigned long e);

/// Narrowing conversion for values known to fit a machine size.
std::size_t to_size(const Integer& n);

Rational abs_rational(const Rational& q);

// Decimal-string I/O. Integers print as plain decimal; rationals print as
// "p" when the denominator is 1 and "p/q" otherwise, matching the wire
// format used throughout the JSON and CSV interfaces.
std::string to_string(const Integer& n);
std::string to_string(const Rational& q);

/// Parses "p" or "p/q" (decimal, optional leading '-'). Throws
/// std::invalid_argument on malformed input or a non-positive denominator.
Rational parse_rational(const std::string& text);

/// Parses a decimal integer string. Throws std::invalid_argument on garbage.
Integer parse_integer(const std::string& text);

double to_double(const Rational& q);

}  // namespace seqlab

#endif  // SEQLAB_NUMERIC_HPP
