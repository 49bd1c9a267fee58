#pragma once

#include "ijq/rational.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ijq {

/** Closed interval [l, r] with rational endpoints, l <= r. */
struct Interval {
    Rational l;
    Rational r;

    bool contains(const Rational& p) const { return l <= p && p <= r; }
    bool operator==(const Interval& other) const = default;
    // Lexicographic on (l, r); spelled out because Rational has no <=>.
    bool operator<(const Interval& other) const {
        if (l != other.l) return l < other.l;
        return r < other.r;
    }
};

/** Interval with validated endpoint order. Throws ParseError if l > r. */
Interval make_interval(Rational l, Rational r);

bool intersects(const Interval& a, const Interval& b);

/**
 * Common intersection of a non-empty list: [max l_i, min r_i] when that is a
 * valid interval, otherwise nullopt. Throws ParseError on empty input.
 */
std::optional<Interval> intersect_all(const std::vector<Interval>& xs);

/**
 * Parse "[l,r]" (closed). Open and half-open forms "(l,r)", "(l,r]", "[l,r)"
 * are accepted by the database loader and normalized there; this function
 * reports openness through the two flags so the caller can apply the
 * epsilon adjustment.
 */
Interval parse_interval_raw(std::string_view text, bool& l_open, bool& r_open);

/** Parse a closed "[l,r]" literal. Throws ParseError on open bounds. */
Interval parse_interval(std::string_view text);

/** Canonical "[l,r]" form using format_rational for both endpoints. */
std::string format_interval(const Interval& x);

}  // namespace ijq
