#pragma once

#include "ijq/acyclicity.hpp"
#include "ijq/hypergraph.hpp"
#include "ijq/rational.hpp"

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace ijq {

/**
 * Optimal solution of the fractional edge cover LP for a vertex set:
 * minimise the total weight over edges subject to every target vertex
 * receiving weight >= 1 from the edges containing it.
 */
struct EdgeCover {
    Rational value;
    std::map<std::string, Rational> weights;  // by edge label; zeros included
};

/**
 * Exact rho*(target) over the edges of h, solved with an exact rational
 * simplex (Bland's rule, no cycling). The returned weights are primal
 * feasible and their total equals the optimal dual objective, so the pair
 * certifies optimality; both checks are asserted before returning.
 * Throws UncoverableVertex if a target vertex lies in no edge.
 */
EdgeCover fractional_edge_cover(const Hypergraph& h, const VertexSet& target);

/**
 * Tree decomposition of a hypergraph: bags of vertices on an unrooted tree.
 * Valid when every edge fits in some bag and every vertex's bags form a
 * connected subtree. A single bag with no tree edges is the trivial case.
 */
struct TreeDecomposition {
    std::vector<VertexSet> bags;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
};

bool is_valid_decomposition(const Hypergraph& h, const TreeDecomposition& td);

struct FhtwResult {
    Rational value;
    TreeDecomposition witness;
};

/**
 * Exact fractional hypertree width: the minimum over tree decompositions of
 * the maximum bag cover number rho*. Computed by dynamic programming over
 * vertex elimination orders, which is exhaustive for this width measure.
 * The witness decomposition is validated and achieves the returned value.
 * Requires |vertices| <= 10; throws SizeLimitExceeded beyond that.
 */
FhtwResult fhtw(const Hypergraph& h);

/**
 * Upper bound on the intersection join width of h: the maximum fhtw over
 * the resolved hypergraph family tau(h), with singleton vertices dropped
 * and isomorphic members deduplicated first. Matches the true ij-width
 * whenever fhtw and submodular width agree on every member; it can only
 * ever err upward.
 */
Rational ijw_fhtw_upper(const Hypergraph& h);

/**
 * Closed-form sizes of the full interval-to-equality reduction on h:
 * the number of produced queries (product of k! over join variables with
 * k incident edges) and, per edge label, the number of transformed
 * variants (product of k over its join variables). Matches reduce_full.
 */
struct CountPrediction {
    Int queries;
    std::map<std::string, Int> variants;
};

CountPrediction predict_counts(const Hypergraph& h);

}  // namespace ijq
