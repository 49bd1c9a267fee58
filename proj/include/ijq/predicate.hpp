#pragma once

#include "ijq/query.hpp"
#include "ijq/relation.hpp"
#include "ijq/segment_tree.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace ijq {

/**
 * Certificate that a set of intervals S has a common point, expressed over
 * a segment tree built from (a superset of) S. The permutation lists index
 * positions into S; nodes u_1..u_k lie on one root-to-leaf path with
 * u_k = leaf of the left endpoint of the last interval in the permutation,
 * and u_j in the canonical partition of the j-th interval for j < k. The
 * bitstrings decompose the path: u_j = b_1 concat ... concat b_j.
 */
struct PredicateWitness {
    std::vector<std::size_t> permutation;
    std::vector<NodeId> nodes;
    std::vector<std::string> bitstrings;
};

/** Plain form: max left endpoint <= min right endpoint. */
bool check_direct(const std::vector<Interval>& s);

/**
 * First rewritten form: some interval's left-endpoint leaf has, for every
 * other interval, an ancestor inside that interval's canonical partition.
 */
bool check_rewriting1(const std::vector<Interval>& s, const SegmentTree& t);

/**
 * Ordered form: searches permutations of S for a witness whose nodes form
 * an ancestor chain ending at the leaf of the last interval's left
 * endpoint. For each permutation at most one chain can match; the first
 * matching permutation in lexicographic order is returned.
 */
std::optional<PredicateWitness> check_rewriting2(const std::vector<Interval>& s,
                                                 const SegmentTree& t);

/**
 * Bitstring form of the ordered rewriting: searches concatenation splits
 * b_1..b_k with every prefix b_1...b_j in the canonical partition of the
 * j-th interval (the full string being the leaf). Searches independently
 * of check_rewriting2 so the two can cross-validate.
 */
std::optional<PredicateWitness> check_rewriting3(const std::vector<Interval>& s,
                                                 const SegmentTree& t);

/**
 * Disjoint form: all (permutation, node tuple) pairs where consecutive
 * nodes are ancestor-ordered, with equality of neighbouring nodes allowed
 * only when the permutation lists their positions in increasing order.
 * Non-empty exactly when the intervals intersect; after
 * perturb_left_endpoints at most one witness survives.
 */
std::vector<PredicateWitness> check_disjoint(const std::vector<Interval>& s,
                                             const SegmentTree& t);

/**
 * Epsilon used to separate left endpoints: a fraction of the smallest gap
 * between distinct endpoint values, small enough that shifting by up to
 * max(interval count, atom_count) of it cannot bridge the gap.
 */
Rational perturbation_epsilon(const Database& db, std::size_t atom_count);

/**
 * Shifts every interval of the i-th atom's relation (1-based) from [l, r]
 * to [l + i*eps, r + n*eps]. Afterwards intervals from different relations
 * have pairwise distinct left endpoints while every intersection join
 * keeps its truth value.
 */
Database perturb_left_endpoints(const Database& db, const Query& q);

}  // namespace ijq
