#pragma once

#include "ijq/hypergraph.hpp"
#include "ijq/query.hpp"
#include "ijq/relation.hpp"

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace ijq {

/**
 * Position an atom takes when one interval variable is resolved: the atom
 * ranked i in the chosen permutation trades the variable for the first i
 * fresh point variables.
 */
struct SplitCount {
    std::string variable;
    int position = 0;  // 1-based rank in the permutation
};

/**
 * Identity of a transformed relation: the original label plus, per resolved
 * interval variable in resolution order, the position its atom took. Two
 * distinct original relations never merge, even with equal schemas.
 */
struct ReducedRelationKey {
    std::string base;
    std::vector<std::pair<std::string, int>> positions;  // (variable, position)

    /** "R" with positions (2,1) renders as "R_{2;1}". */
    std::string render() const;

    /**
     * Inverse of render on the label alone; variable names are not encoded
     * in labels and come back empty.
     */
    static ReducedRelationKey parse(const std::string& label);

    bool operator==(const ReducedRelationKey&) const = default;
    auto operator<=>(const ReducedRelationKey&) const = default;
};

struct ReductionOutput {
    std::vector<Hypergraph> hypergraphs;  // of the queries, deduplicated by labeled equality
    std::vector<Query> queries;           // one per combination of permutations
    Database database;                    // labels are rendered keys; covers every query
};

/**
 * ReductionOutput plus row provenance: for every relation in the output
 * database, the index of the input row each output row was derived from
 * (the identity map for untouched relations). Evaluation uses this to turn
 * a satisfying assignment of a reduced query back into input tuples.
 */
struct ReductionTrace {
    ReductionOutput output;
    std::map<std::string, std::vector<std::size_t>> provenance;
};

/**
 * Fresh point-variable names for resolving x into k parts: x1..xk, with
 * underscores appended until the names avoid everything in taken.
 */
std::vector<std::string> fresh_point_names(const std::string& x, std::size_t k,
                                           const std::vector<std::string>& taken);

/**
 * Replace vertex x: the edge ranked i in sigma (a permutation of the labels
 * of the edges containing x) gets fresh vertices x1..xi in x's place.
 * Labels are preserved.
 */
Hypergraph onestep_hypergraph(const Hypergraph& h, const std::string& x,
                              const std::vector<std::string>& sigma);

/**
 * Same on a query: affected atoms are relabeled by their ReducedRelationKey
 * and the fresh point variables are spliced in at x's schema position.
 */
Query onestep_query(const Query& q, const std::string& x,
                    const std::vector<std::string>& sigma);

/** The members for every permutation of the atoms containing x. */
std::vector<Query> onestep_query_all(const Query& q, const std::string& x);

/** All ordered ways to write s as a concatenation of parts many pieces (empty pieces allowed). */
std::vector<std::vector<std::string>> bitstring_splits(const std::string& s, std::size_t parts);

/**
 * One-step database transformation for resolving x under sigma: rows of the
 * atom ranked i spawn one row per (node, split) pair, where the nodes are
 * the canonical partition of the row's x-interval for i < k and the leaf of
 * its left endpoint for i = k. The tree is built over the x-cells of every
 * relation involved. Untouched relations are copied.
 */
Database onestep_database(const Database& db, const Query& q, const std::string& x,
                          const std::vector<std::string>& sigma);

/**
 * Full reduction: resolves every interval variable occurring in at least
 * two atoms, in lexicographic order, composing the one-step transforms.
 * The input query is true on the input database exactly when some output
 * query is true on the output database.
 */
ReductionOutput reduce_full(const Query& q, const Database& db);

/** reduce_full with row provenance retained. */
ReductionTrace reduce_full_traced(const Query& q, const Database& db);

/**
 * Hypergraph-only composition over all permutation combinations, resolving
 * every vertex of degree >= 2 in lexicographic order. Deduplicated by
 * labeled equality; the count is the product of k! over resolved vertices.
 */
std::vector<Hypergraph> tau(const Hypergraph& h);

/**
 * Drops variables occurring in exactly one atom, projects schemas, and
 * deduplicates queries that became identical as multisets of
 * (original label, projected schema) atoms. Intended for counting and
 * width analysis; evaluation keeps the full disjunction.
 */
std::vector<Query> simplify(const std::vector<Query>& queries);

/**
 * Correspondence between an equality-join query and the interval query
 * shape it reduces from: for each resolved interval variable, the ordered
 * fresh names standing in for it.
 */
struct BackwardTargetKey {
    Query ij_query;
    std::map<std::string, std::vector<std::string>> groups;  // variable -> x1..xk
};

/** The key reduce_full would use for this query's shapes. */
BackwardTargetKey backward_key_for(const Query& ij_query);

/**
 * Backward transformation: every group of fresh point columns holding
 * equal-length bitstrings is concatenated and mapped to its dyadic
 * segment of [0,1) (halving per bit, left-closed), then closed on the
 * right by a gap-safe epsilon. Row counts are preserved exactly and the
 * interval query is true on the result exactly when q_ej is true on db_ej.
 */
std::pair<Query, Database> backward_transform(const Query& q_ej, const Database& db_ej,
                                              const BackwardTargetKey& target);

/**
 * Hardness embedding: lifts a k-cycle equality-join instance (relations in
 * label order, each binary, column 2 joining the next relation's column 1)
 * into a database for target, which must contain a Berge cycle of length
 * exactly k. Cycle variables carry point intervals [a,a]; everything else
 * is a wide filler interval. The target query is true exactly when the
 * cycle query is true on cycle_db.
 */
std::pair<Query, Database> embed_cycle_query(const Query& target, std::size_t k,
                                             const Database& cycle_db);

}  // namespace ijq
