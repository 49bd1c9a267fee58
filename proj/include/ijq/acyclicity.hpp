#pragma once

#include "ijq/hypergraph.hpp"

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace ijq {

using VertexSet = std::vector<std::string>;  // sorted, duplicate-free
using SetFamily = std::vector<VertexSet>;    // sorted, duplicate-free members

/** {e ∩ S : e ∈ E, e ∩ S ≠ ∅} as a set of vertex sets (duplicates merged). */
SetFamily induced_set(const Hypergraph& h, const VertexSet& s);

/** Inclusion-maximal members of a set family. */
SetFamily minimisation(SetFamily family);

/** One GYO rewrite step, recorded for join-tree construction and debugging. */
struct GyoStep {
    enum class Kind { RemoveVertex, RemoveEdge };
    Kind kind;
    std::string vertex;  // RemoveVertex: the vertex; RemoveEdge: unused
    std::string edge;    // the edge acted on
    std::string into;    // RemoveEdge: the subsuming edge ("" when removed as empty root)
};

struct GyoResult {
    Hypergraph residual;
    std::vector<GyoStep> trace;

    bool emptied() const { return residual.edges.empty(); }
};

/**
 * GYO reduction to fixpoint: (1) drop a vertex occurring in exactly one
 * edge; (2) drop an edge that is empty or contained in a distinct edge.
 * The hypergraph is alpha-acyclic exactly when the residual has no edges.
 */
GyoResult gyo_reduce(const Hypergraph& h);

bool is_alpha_acyclic(const Hypergraph& h);

/**
 * Join tree over the original edge labels. Every query vertex induces a
 * connected subtree of nodes whose edges contain it.
 */
struct JoinTree {
    std::vector<std::string> labels;
    std::vector<std::pair<std::size_t, std::size_t>> edges;  // index pairs into labels
};

/** Built from the GYO trace; nullopt when the hypergraph is not acyclic. */
std::optional<JoinTree> build_join_tree(const Hypergraph& h);

/** Structural check of the JoinTree invariants against h. */
bool is_valid_join_tree(const Hypergraph& h, const JoinTree& tree);

/**
 * Conformality by exhaustive subset search over the definition:
 * no S with |S| >= 3 whose induced minimisation is {S∖{x} : x ∈ S}.
 * Throws SizeLimitExceeded beyond 12 vertices.
 */
bool is_conformal(const Hypergraph& h);

/**
 * Cycle-freeness by exhaustive subset search: no vertex set S, |S| >= 3,
 * whose induced minimisation is a single |S|-cycle of 2-element edges.
 * Throws SizeLimitExceeded beyond 12 vertices.
 */
bool is_cycle_free(const Hypergraph& h);

/**
 * Alternating cycle e1, v1, e2, v2, ..., en, vn (closing back at e1) with
 * pairwise-distinct edges, pairwise-distinct vertices, and vi in ei ∩ ei+1.
 */
struct BergeCycle {
    std::vector<std::string> edge_labels;
    std::vector<std::string> vertices;

    std::size_t length() const { return edge_labels.size(); }
};

/** Validate the BergeCycle invariants against h. */
bool is_valid_berge_cycle(const Hypergraph& h, const BergeCycle& cycle);

/**
 * Some Berge cycle with min_len <= length <= max_len (min_len >= 2), or
 * nullopt. Deterministic: depth-first over the incidence graph in
 * label/vertex order.
 */
std::optional<BergeCycle> find_berge_cycle(
    const Hypergraph& h, std::size_t min_len,
    std::size_t max_len = std::numeric_limits<std::size_t>::max());

/** No Berge cycle of length > 2. */
bool is_iota_acyclic(const Hypergraph& h);

/**
 * The definitional form: every member of tau(h) is alpha-acyclic.
 * Equivalent to is_iota_acyclic; kept separate as a cross-check.
 * Throws SizeLimitExceeded when the tau enumeration would exceed caps.
 */
bool is_iota_acyclic_semantic(const Hypergraph& h);

/** Cycle-free and no x,y,z inducing {{x,y},{x,z},{x,y,z}}. */
bool is_gamma_acyclic(const Hypergraph& h);

/** No Berge cycle at all (length >= 2). */
bool is_berge_acyclic(const Hypergraph& h);

/** Remove vertices occurring in exactly one edge, then drop emptied edges. */
Hypergraph drop_singleton_vertices(const Hypergraph& h);

/**
 * Label-insensitive canonical form: lexicographically minimal sorted edge
 * multiset over vertex bijections. Vertices are first split by an invariant
 * (occurrence count + incident edge sizes) to prune the permutation space.
 * Throws SizeLimitExceeded beyond 12 vertices.
 */
std::string canonical_form(const Hypergraph& h);

bool isomorphic(const Hypergraph& a, const Hypergraph& b);

/** Group indices of hs into isomorphism classes (order of first appearance). */
std::vector<std::vector<std::size_t>> isomorphism_classes(const std::vector<Hypergraph>& hs);

}  // namespace ijq
