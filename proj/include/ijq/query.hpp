#pragma once

#include "ijq/errors.hpp"

#include <compare>
#include <string>
#include <vector>

namespace ijq {

enum class VarKind { Point, Interval };

/**
 * A query variable. Interval variables ([X] in query text) join by interval
 * intersection; point variables join by equality. The kind is a property of
 * the name: one name never appears with both kinds in a query.
 */
struct Variable {
    std::string name;
    VarKind kind = VarKind::Point;

    bool operator==(const Variable& other) const = default;
    auto operator<=>(const Variable& other) const = default;
};

/**
 * One atom R_e(e). The label is the relation name plus an occurrence index
 * when the query self-joins (R#1, R#2), so labels are unique per query.
 */
struct Atom {
    std::string label;
    std::vector<Variable> schema;

    bool operator==(const Atom& other) const = default;
};

enum class QueryClass { EqualityJoin, IntersectionJoin, Mixed };

/** Boolean conjunctive query: a non-empty conjunction of atoms. */
struct Query {
    std::vector<Atom> atoms;

    bool operator==(const Query& other) const = default;

    /** All variable names in first-appearance order, no duplicates. */
    std::vector<std::string> variable_names() const;

    /** Kind of a named variable. Throws Error if the name is unknown. */
    VarKind kind_of(const std::string& name) const;

    /** Indices of atoms whose schema mentions the variable. */
    std::vector<std::size_t> atoms_with(const std::string& name) const;

    QueryClass classify() const;
};

/**
 * Structural validity: non-empty, unique atom labels, non-empty schemas, no
 * variable repeated inside one atom, one kind per variable name.
 * Throws DuplicateVariableInAtom / Error accordingly.
 */
void check_well_formed(const Query& q);

struct Hypergraph;

/** The query's hypergraph: one labeled edge per atom over variable names. */
Hypergraph hypergraph_of(const Query& q);

}  // namespace ijq
