#pragma once

#include "ijq/query.hpp"
#include "ijq/relation.hpp"
#include "ijq/widths.hpp"

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace ijq {

enum class Strategy { Auto, OracleOnly, ReduceYannakakis, ReduceDecomp };

struct EvalOptions {
    Strategy strategy = Strategy::Auto;
    /** Evaluate the reduced sub-queries concurrently. Never changes the
     *  result; the set of sub-queries reported as evaluated, and which
     *  satisfying sub-query supplies the witness, may vary between runs. */
    bool parallel = false;
    /** Row-count product limit for the oracle engine. */
    std::size_t max_oracle_cells = 10000000;
    /** Auto falls back from decomposition to the generic join above this
     *  many sub-query variables (hard-capped at 10 by fhtw). */
    std::size_t vertex_cap = 10;
};

struct EvalReport {
    bool result = false;
    /** True when a satisfying sub-query was found before the last one. */
    bool early_exit = false;
    /** (sub-query name, engine) for every sub-query that was evaluated. */
    std::vector<std::pair<std::string, std::string>> engines;
    /** (phase, seconds): reduce, analyze, evaluate. */
    std::vector<std::pair<std::string, double>> timings;
    /** Row counts of the transformed relations fed to the engines. */
    std::map<std::string, std::size_t> relation_sizes;
    /** When true: one witness row index per input atom label, revalidated
     *  against the input query's semantics before reporting. */
    std::map<std::string, std::size_t> witness;
    bool witness_checked = false;
};

/**
 * Definition check by exhaustive search: one tuple per atom such that every
 * interval variable's cells intersect in a common point and every point
 * variable's cells are equal. Throws TooLargeForOracle when the product of
 * relation sizes exceeds max_cells.
 */
bool oracle_eval(const Query& q, const Database& db,
                 std::size_t max_cells = 10000000);

/** The same per-variable semantics applied to one chosen row per atom. */
bool check_witness(const Query& q, const Database& db,
                   const std::map<std::string, std::size_t>& rows);

/**
 * Bottom-up semi-join reduction along a join tree; true exactly when the
 * root relation keeps a row. Linear in the data up to sorting. Throws
 * NotAcyclic without a join tree and KindMismatch if atoms share an
 * interval variable (unshared interval columns are carried, never joined).
 */
bool yannakakis_bool(const Query& q, const Database& db);

/**
 * Worst-case optimal multiway join, leapfrog style: point variables are
 * ordered by decreasing atom degree (ties lexicographic) and resolved by
 * intersecting sorted projections; returns at the first full assignment.
 * Works on any equality-join query; same interval-variable rule as above.
 */
bool wcoj_bool(const Query& q, const Database& db);

/**
 * Evaluation over a tree decomposition: every bag is materialised by the
 * worst-case optimal join of the covering relations' projections, then the
 * bags are joined along the decomposition tree, which is acyclic by
 * construction. Throws InvalidDecomposition if td does not fit the query.
 */
bool decomp_eval(const Query& q, const Database& db, const TreeDecomposition& td);

/**
 * Full pipeline for queries with intersection joins: transform to the
 * equivalent disjunction of equality-join queries, pick an engine per
 * sub-query (join tree when acyclic, width-optimal decomposition when small
 * enough, generic join otherwise), and OR the results with early exit.
 * A true result carries a validated witness over the input database.
 */
EvalReport eval_ij(const Query& q, const Database& db, const EvalOptions& options = {});

}  // namespace ijq
