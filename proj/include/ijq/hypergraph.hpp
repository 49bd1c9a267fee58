#pragma once

#include <string>
#include <vector>

namespace ijq {

/** Labeled hyperedge. The vertex list is sorted and duplicate-free. */
struct Hyperedge {
    std::string label;
    std::vector<std::string> vertices;

    bool operator==(const Hyperedge& other) const = default;
};

/**
 * Multi-hypergraph: edges with equal vertex sets but distinct labels are
 * distinct edges. Vertex list is sorted and duplicate-free and contains
 * every vertex of every edge (isolated vertices are allowed but unused).
 */
struct Hypergraph {
    std::vector<std::string> vertices;
    std::vector<Hyperedge> edges;

    bool operator==(const Hypergraph& other) const = default;

    bool has_vertex(const std::string& v) const;

    /** Number of edges whose vertex set contains v. */
    std::size_t degree(const std::string& v) const;

    /** Labels of edges containing v, in edge order. */
    std::vector<std::string> edges_with(const std::string& v) const;

    /** Index of the edge with the given label. Throws Error if absent. */
    std::size_t edge_index(const std::string& label) const;
};

/** Hypergraph with vertices recomputed as the union of edge vertex sets. */
Hypergraph make_hypergraph(std::vector<Hyperedge> edges);

}  // namespace ijq
