#include "ijq/rational.hpp"

#include "ijq/errors.hpp"

#include <cctype>

namespace ijq {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

// Decimal value of a digit string. The Int(std::string) constructor treats a
// leading zero as an octal prefix, so "025" must not go through it.
Int digits_value(std::string_view s) {
    Int value = 0;
    for (char c : s) value = value * 10 + (c - '0');
    return value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    std::string_view s = text;
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    if (s.empty()) throw ParseError("empty rational literal: '" + std::string(text) + "'");

    auto slash = s.find('/');
    auto dot = s.find('.');
    Rational value;
    if (slash != std::string_view::npos) {
        std::string_view num = s.substr(0, slash);
        std::string_view den = s.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den))
            throw ParseError("malformed rational literal: '" + std::string(text) + "'");
        Int d = digits_value(den);
        if (d == 0) throw ParseError("zero denominator: '" + std::string(text) + "'");
        value = Rational(digits_value(num));
        value /= Rational(d);
    } else if (dot != std::string_view::npos) {
        std::string_view whole = s.substr(0, dot);
        std::string_view frac = s.substr(dot + 1);
        if (!all_digits(whole) || !all_digits(frac))
            throw ParseError("malformed decimal literal: '" + std::string(text) + "'");
        Int scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
        Int numerator = digits_value(whole) * scale + digits_value(frac);
        value = Rational(numerator);
        value /= Rational(scale);
    } else {
        if (!all_digits(s)) throw ParseError("malformed integer literal: '" + std::string(text) + "'");
        value = Rational(digits_value(s));
    }
    return negative ? Rational(-value) : value;
}

std::string format_rational(const Rational& value) {
    Int num = boost::multiprecision::numerator(value);
    Int den = boost::multiprecision::denominator(value);
    if (den == 1) return num.str();

    // A finite decimal exists iff the denominator is 2^a * 5^b; scale to
    // 10^max(a,b). The scaled numerator then never ends in 0 because the
    // reduced numerator is coprime to the denominator.
    Int d = den;
    int twos = 0;
    int fives = 0;
    while (d % 2 == 0) {
        d /= 2;
        ++twos;
    }
    while (d % 5 == 0) {
        d /= 5;
        ++fives;
    }
    if (d != 1) return num.str() + "/" + den.str();

    int digits = twos > fives ? twos : fives;
    Int scale = 1;
    for (int i = 0; i < digits; ++i) scale *= 10;
    Int scaled = num * (scale / den);
    bool negative = scaled < 0;
    std::string body = (negative ? Int(-scaled) : scaled).str();
    if (static_cast<int>(body.size()) <= digits) body.insert(0, digits + 1 - body.size(), '0');
    body.insert(body.size() - digits, ".");
    return (negative ? "-" : "") + body;
}

}  // namespace ijq
