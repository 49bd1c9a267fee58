#include "ijq/interval.hpp"

#include "ijq/errors.hpp"

namespace ijq {

Interval make_interval(Rational l, Rational r) {
    if (l > r)
        throw ParseError("interval has l > r: [" + format_rational(l) + "," + format_rational(r) + "]");
    return Interval{std::move(l), std::move(r)};
}

bool intersects(const Interval& a, const Interval& b) {
    return a.l <= b.r && b.l <= a.r;
}

std::optional<Interval> intersect_all(const std::vector<Interval>& xs) {
    if (xs.empty()) throw ParseError("intersect_all on empty list");
    Rational lo = xs.front().l;
    Rational hi = xs.front().r;
    for (std::size_t i = 1; i < xs.size(); ++i) {
        if (xs[i].l > lo) lo = xs[i].l;
        if (xs[i].r < hi) hi = xs[i].r;
    }
    if (lo > hi) return std::nullopt;
    return Interval{std::move(lo), std::move(hi)};
}

Interval parse_interval_raw(std::string_view text, bool& l_open, bool& r_open) {
    if (text.size() < 5) throw ParseError("malformed interval literal: '" + std::string(text) + "'");
    char open = text.front();
    char close = text.back();
    if (open != '[' && open != '(')
        throw ParseError("interval must start with '[' or '(': '" + std::string(text) + "'");
    if (close != ']' && close != ')')
        throw ParseError("interval must end with ']' or ')': '" + std::string(text) + "'");
    l_open = open == '(';
    r_open = close == ')';

    std::string_view body = text.substr(1, text.size() - 2);
    auto comma = body.find(',');
    if (comma == std::string_view::npos || body.find(',', comma + 1) != std::string_view::npos)
        throw ParseError("interval needs exactly one comma: '" + std::string(text) + "'");
    Rational l = parse_rational(body.substr(0, comma));
    Rational r = parse_rational(body.substr(comma + 1));
    if (l > r || (l == r && (l_open || r_open)))
        throw ParseError("empty interval literal: '" + std::string(text) + "'");
    return Interval{std::move(l), std::move(r)};
}

Interval parse_interval(std::string_view text) {
    bool l_open = false;
    bool r_open = false;
    Interval x = parse_interval_raw(text, l_open, r_open);
    if (l_open || r_open)
        throw ParseError("open interval where a closed one is required: '" + std::string(text) + "'");
    return x;
}

std::string format_interval(const Interval& x) {
    return "[" + format_rational(x.l) + "," + format_rational(x.r) + "]";
}

}  // namespace ijq
