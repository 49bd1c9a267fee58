#include "ijq/widths.hpp"

#include "ijq/errors.hpp"
#include "ijq/reduction.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace ijq {
namespace {

/**
 * Exact primal simplex for: maximise sum(y) subject to A y <= 1, y >= 0,
 * where row e of A marks the target vertices contained in edge e. The slack
 * basis is feasible, so no phase one is needed, and Bland's rule guarantees
 * termination. This is the LP dual of the fractional edge cover; the cover
 * weights are read off the slack columns of the final objective row.
 */
struct CoverSimplex {
    std::size_t rows;                        // one per edge
    std::size_t cols;                        // target vertices, then slacks
    std::vector<std::vector<Rational>> a;    // constraint matrix, tableau form
    std::vector<Rational> rhs;               // >= 0 throughout
    std::vector<Rational> obj;               // reduced costs z_j - c_j
    Rational value = 0;                      // current objective
    std::vector<std::size_t> basis;          // basic column per row

    CoverSimplex(std::size_t edges, std::size_t targets)
        : rows(edges),
          cols(targets + edges),
          a(edges, std::vector<Rational>(cols, 0)),
          rhs(edges, 1),
          obj(cols, 0),
          basis(edges) {
        for (std::size_t i = 0; i < rows; ++i) {
            a[i][targets + i] = 1;
            basis[i] = targets + i;
        }
        for (std::size_t j = 0; j < targets; ++j) obj[j] = -1;
    }

    void pivot(std::size_t row, std::size_t col) {
        const Rational inv = 1 / a[row][col];
        for (auto& cell : a[row]) cell *= inv;
        rhs[row] *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == row || a[i][col] == 0) continue;
            const Rational f = a[i][col];
            for (std::size_t j = 0; j < cols; ++j) a[i][j] -= f * a[row][j];
            rhs[i] -= f * rhs[row];
        }
        if (obj[col] != 0) {
            const Rational f = obj[col];
            for (std::size_t j = 0; j < cols; ++j) obj[j] -= f * a[row][j];
            value -= f * rhs[row];
        }
        basis[row] = col;
    }

    void solve() {
        for (;;) {
            std::size_t enter = cols;
            for (std::size_t j = 0; j < cols; ++j)
                if (obj[j] < 0) {
                    enter = j;
                    break;
                }
            if (enter == cols) return;

            std::size_t leave = rows;
            std::optional<Rational> best;
            for (std::size_t i = 0; i < rows; ++i) {
                if (a[i][enter] <= 0) continue;
                Rational ratio = rhs[i] / a[i][enter];
                if (!best || ratio < *best ||
                    (ratio == *best && basis[i] < basis[leave])) {
                    best = ratio;
                    leave = i;
                }
            }
            if (leave == rows)
                throw Error("cover LP is unbounded; every target vertex must touch an edge");
            pivot(leave, enter);
        }
    }
};

Int factorial(std::size_t n) {
    Int out = 1;
    for (std::size_t i = 2; i <= n; ++i) out *= i;
    return out;
}

std::string labeled_signature(const Hypergraph& h) {
    std::vector<std::string> parts;
    for (const Hyperedge& e : h.edges) {
        std::string p = e.label + "(";
        for (const std::string& v : e.vertices) p += v + ",";
        p += ")";
        parts.push_back(std::move(p));
    }
    std::sort(parts.begin(), parts.end());
    std::string out;
    for (const std::string& p : parts) out += p + ";";
    return out;
}

void require(bool ok, const char* what) {
    if (!ok) throw Error(std::string("internal invariant failed: ") + what);
}

}  // namespace

EdgeCover fractional_edge_cover(const Hypergraph& h, const VertexSet& target) {
    for (const std::string& v : target)
        if (h.degree(v) == 0)
            throw UncoverableVertex("no edge covers vertex " + v);

    CoverSimplex lp(h.edges.size(), target.size());
    for (std::size_t e = 0; e < h.edges.size(); ++e)
        for (std::size_t j = 0; j < target.size(); ++j)
            if (std::binary_search(h.edges[e].vertices.begin(),
                                   h.edges[e].vertices.end(), target[j]))
                lp.a[e][j] = 1;
    lp.solve();

    EdgeCover cover;
    cover.value = lp.value;
    for (std::size_t e = 0; e < h.edges.size(); ++e) {
        // At optimality the reduced cost of slack e is the dual multiplier
        // of constraint e, which is exactly the cover weight of edge e.
        const Rational& w = lp.obj[target.size() + e];
        require(w >= 0, "cover weight is negative");
        cover.weights[h.edges[e].label] = w;
    }

    // Certificate: the weights are a feasible cover and their total matches
    // the optimal value of the dual LP just solved, so both are optimal.
    Rational total = 0;
    for (const auto& [label, w] : cover.weights) total += w;
    require(total == cover.value, "cover total differs from dual optimum");
    for (const std::string& v : target) {
        Rational covered = 0;
        for (const Hyperedge& e : h.edges)
            if (std::binary_search(e.vertices.begin(), e.vertices.end(), v))
                covered += cover.weights.at(e.label);
        require(covered >= 1, "cover leaves a target vertex uncovered");
    }
    return cover;
}

bool is_valid_decomposition(const Hypergraph& h, const TreeDecomposition& td) {
    const std::size_t n = td.bags.size();
    for (const auto& [a, b] : td.edges)
        if (a >= n || b >= n || a == b) return false;
    if (n > 0 && td.edges.size() + 1 != n) return false;

    std::vector<std::vector<std::size_t>> adj(n);
    for (const auto& [a, b] : td.edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    // n bags with n-1 edges form a tree exactly when they are connected.
    if (n > 0) {
        std::vector<char> seen(n, 0);
        std::vector<std::size_t> stack{0};
        seen[0] = 1;
        while (!stack.empty()) {
            std::size_t u = stack.back();
            stack.pop_back();
            for (std::size_t w : adj[u])
                if (!seen[w]) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
        }
        if (std::count(seen.begin(), seen.end(), 1) != static_cast<long>(n))
            return false;
    }

    for (const Hyperedge& e : h.edges) {
        bool fits = false;
        for (const VertexSet& bag : td.bags)
            if (std::includes(bag.begin(), bag.end(), e.vertices.begin(),
                              e.vertices.end())) {
                fits = true;
                break;
            }
        if (!fits) return false;
    }

    for (const std::string& v : h.vertices) {
        std::vector<std::size_t> holding;
        for (std::size_t i = 0; i < n; ++i)
            if (std::binary_search(td.bags[i].begin(), td.bags[i].end(), v))
                holding.push_back(i);
        if (holding.empty()) {
            if (h.degree(v) > 0) return false;
            continue;
        }
        std::set<std::size_t> member(holding.begin(), holding.end());
        std::set<std::size_t> seen{holding[0]};
        std::vector<std::size_t> stack{holding[0]};
        while (!stack.empty()) {
            std::size_t u = stack.back();
            stack.pop_back();
            for (std::size_t w : adj[u])
                if (member.count(w) && !seen.count(w)) {
                    seen.insert(w);
                    stack.push_back(w);
                }
        }
        if (seen.size() != member.size()) return false;
    }
    return true;
}

FhtwResult fhtw(const Hypergraph& h) {
    const std::size_t n = h.vertices.size();
    if (n > 10) throw SizeLimitExceeded("fhtw limited to 10 vertices, got " +
                                        std::to_string(n));
    if (n == 0) return {Rational(0), TreeDecomposition{{{}}, {}}};

    std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
    for (const Hyperedge& e : h.edges)
        for (const std::string& u : e.vertices)
            for (const std::string& w : e.vertices) {
                std::size_t iu = std::lower_bound(h.vertices.begin(),
                                                  h.vertices.end(), u) -
                                 h.vertices.begin();
                std::size_t iw = std::lower_bound(h.vertices.begin(),
                                                  h.vertices.end(), w) -
                                 h.vertices.begin();
                if (iu != iw) adj[iu][iw] = 1;
            }

    // Elimination bag of v against the still-present set: v itself plus every
    // present vertex reachable from v through already-eliminated ones. This
    // is v's neighborhood in the fill-in graph of any order eliminating the
    // absent vertices first, which is all the DP below needs.
    auto bag_mask = [&](std::size_t v, unsigned present) {
        unsigned bag = 1u << v;
        unsigned visited = 1u << v;
        std::vector<std::size_t> stack{v};
        while (!stack.empty()) {
            std::size_t u = stack.back();
            stack.pop_back();
            for (std::size_t w = 0; w < n; ++w) {
                if (!adj[u][w] || (visited >> w & 1)) continue;
                visited |= 1u << w;
                if (present >> w & 1)
                    bag |= 1u << w;
                else
                    stack.push_back(w);
            }
        }
        return bag;
    };

    auto vertices_of = [&](unsigned mask) {
        VertexSet out;
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1) out.push_back(h.vertices[i]);
        return out;
    };

    std::map<unsigned, Rational> rho_memo;
    auto rho = [&](unsigned mask) {
        auto it = rho_memo.find(mask);
        if (it != rho_memo.end()) return it->second;
        Rational r = fractional_edge_cover(h, vertices_of(mask)).value;
        rho_memo.emplace(mask, r);
        return r;
    };

    const unsigned full = (1u << n) - 1;
    std::vector<Rational> best(full + 1, 0);
    std::vector<std::size_t> choice(full + 1, n);
    for (unsigned mask = 1; mask <= full; ++mask) {
        std::optional<Rational> width;
        for (std::size_t v = 0; v < n; ++v) {
            if (!(mask >> v & 1)) continue;
            Rational w = rho(bag_mask(v, mask));
            const Rational& rest = best[mask & ~(1u << v)];
            if (rest > w) w = rest;
            if (!width || w < *width) {
                width = w;
                choice[mask] = v;
            }
        }
        best[mask] = *width;
    }

    std::vector<std::size_t> order;
    std::vector<unsigned> bag_masks;
    unsigned mask = full;
    while (mask != 0) {
        std::size_t v = choice[mask];
        order.push_back(v);
        bag_masks.push_back(bag_mask(v, mask));
        mask &= ~(1u << v);
    }

    TreeDecomposition td;
    for (unsigned bm : bag_masks) td.bags.push_back(vertices_of(bm));
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
        std::size_t parent = i + 1;
        for (std::size_t j = i + 1; j < order.size(); ++j)
            if (bag_masks[i] >> order[j] & 1) {
                parent = j;
                break;
            }
        td.edges.emplace_back(i, parent);
    }

    require(is_valid_decomposition(h, td), "fhtw witness is not a decomposition");
    Rational achieved = 0;
    for (unsigned bm : bag_masks) achieved = std::max(achieved, rho(bm));
    require(achieved == best[full], "fhtw witness misses the optimum");
    return {best[full], td};
}

Rational ijw_fhtw_upper(const Hypergraph& h) {
    std::vector<Hypergraph> members;
    std::set<std::string> seen;
    for (const Hypergraph& m : tau(h)) {
        Hypergraph d = drop_singleton_vertices(m);
        if (seen.insert(labeled_signature(d)).second) members.push_back(std::move(d));
    }
    Rational bound = h.edges.empty() ? 0 : 1;
    for (const std::vector<std::size_t>& group : isomorphism_classes(members))
        bound = std::max(bound, fhtw(members[group.front()]).value);
    return bound;
}

CountPrediction predict_counts(const Hypergraph& h) {
    CountPrediction out;
    out.queries = 1;
    for (const Hyperedge& e : h.edges) out.variants[e.label] = 1;
    for (const std::string& v : h.vertices) {
        std::size_t k = h.degree(v);
        if (k < 2) continue;
        out.queries *= factorial(k);
        for (const std::string& label : h.edges_with(v)) out.variants[label] *= k;
    }
    return out;
}

}  // namespace ijq
