#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace ijq {

using Int = boost::multiprecision::cpp_int;

/**
 * Exact rational number. Endpoints, epsilon shifts and LP arithmetic all run
 * on this type; nothing in the library rounds. Kept in lowest terms with a
 * positive denominator by the backing implementation.
 */
using Rational = boost::multiprecision::cpp_rational;

/**
 * Parse "42", "-3.25" or "13/4" into an exact Rational.
 * Decimal literals are parsed exactly (3.25 -> 13/4), never via floating point.
 * Throws ParseError on malformed input or a zero denominator.
 */
Rational parse_rational(std::string_view text);

/**
 * Canonical text form: integers as "n"; fractions with a 2^a*5^b denominator
 * as the exact finite decimal ("13/4" -> "3.25"); anything else as "p/q".
 * parse_rational(format_rational(x)) == x for every x.
 */
std::string format_rational(const Rational& value);

}  // namespace ijq
