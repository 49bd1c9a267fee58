#pragma once

#include "ijq/interval.hpp"
#include "ijq/query.hpp"

#include <compare>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace ijq {

/**
 * A 0/1 string cell. Reduced relations hold segment-tree node identifiers in
 * these; they join by equality like any other point value. The empty string
 * is the tree root and is a legal value.
 */
struct Bitstring {
    std::string bits;

    bool operator==(const Bitstring& other) const = default;
    auto operator<=>(const Bitstring& other) const = default;
};

/** One cell: a point number, a closed interval, or a bitstring. */
using Value = std::variant<Rational, Interval, Bitstring>;

using Tuple = std::vector<Value>;

struct Relation {
    std::string label;
    std::vector<Variable> schema;
    std::vector<Tuple> rows;

    /** Position of the named column. Throws Error if absent. */
    std::size_t column(const std::string& name) const;
};

/** Relations keyed by atom label. */
struct Database {
    std::map<std::string, Relation> relations;

    const Relation& at(const std::string& label) const;

    /** Total row count over all relations. */
    std::size_t total_rows() const;
};

/**
 * Check db against q: every atom label present, arities equal, interval
 * columns hold Interval cells and point columns hold Rational or Bitstring
 * cells (uniformly per column). Error messages name relation and column.
 * Throws MissingRelation / ArityMismatch / KindMismatch.
 */
void validate(const Database& db, const Query& q);

std::string format_value(const Value& v);

}  // namespace ijq
