#include "ijq/acyclicity.hpp"

#include "ijq/errors.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>

namespace ijq {

namespace {

constexpr std::size_t kVertexCap = 12;

bool subset_of(const VertexSet& a, const VertexSet& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

VertexSet intersect(const VertexSet& a, const VertexSet& b) {
    VertexSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

}  // namespace

SetFamily induced_set(const Hypergraph& h, const VertexSet& s) {
    std::set<VertexSet> members;
    for (const Hyperedge& e : h.edges) {
        VertexSet cut = intersect(e.vertices, s);
        if (!cut.empty()) members.insert(std::move(cut));
    }
    return SetFamily(members.begin(), members.end());
}

SetFamily minimisation(SetFamily family) {
    std::sort(family.begin(), family.end());
    family.erase(std::unique(family.begin(), family.end()), family.end());
    SetFamily maximal;
    for (const VertexSet& a : family) {
        bool dominated = false;
        for (const VertexSet& b : family) {
            if (&a != &b && a != b && subset_of(a, b)) {
                dominated = true;
                break;
            }
        }
        if (!dominated) maximal.push_back(a);
    }
    return maximal;
}

GyoResult gyo_reduce(const Hypergraph& h) {
    GyoResult result;
    result.residual = h;
    auto& edges = result.residual.edges;

    for (;;) {
        // Rule 1: a vertex occurring in exactly one edge.
        bool applied = false;
        std::map<std::string, std::vector<std::size_t>> occurrence;
        for (std::size_t i = 0; i < edges.size(); ++i) {
            for (const std::string& v : edges[i].vertices) occurrence[v].push_back(i);
        }
        for (const auto& [v, where] : occurrence) {
            if (where.size() != 1) continue;
            Hyperedge& e = edges[where.front()];
            e.vertices.erase(std::find(e.vertices.begin(), e.vertices.end(), v));
            result.trace.push_back({GyoStep::Kind::RemoveVertex, v, e.label, ""});
            applied = true;
            break;
        }
        if (applied) continue;

        // Rule 2: an edge that is empty or contained in a distinct edge.
        for (std::size_t i = 0; i < edges.size() && !applied; ++i) {
            std::string into;
            bool removable = edges[i].vertices.empty() && edges.size() == 1;
            for (std::size_t j = 0; j < edges.size() && !removable; ++j) {
                if (i == j) continue;
                if (subset_of(edges[i].vertices, edges[j].vertices)) {
                    removable = true;
                    into = edges[j].label;
                }
            }
            if (removable) {
                result.trace.push_back({GyoStep::Kind::RemoveEdge, "", edges[i].label, into});
                edges.erase(edges.begin() + static_cast<std::ptrdiff_t>(i));
                applied = true;
            }
        }
        if (!applied) break;
    }

    std::set<std::string> remaining;
    for (const Hyperedge& e : result.residual.edges)
        remaining.insert(e.vertices.begin(), e.vertices.end());
    result.residual.vertices.assign(remaining.begin(), remaining.end());
    return result;
}

bool is_alpha_acyclic(const Hypergraph& h) {
    return gyo_reduce(h).emptied();
}

std::optional<JoinTree> build_join_tree(const Hypergraph& h) {
    GyoResult gyo = gyo_reduce(h);
    if (!gyo.emptied()) return std::nullopt;

    JoinTree tree;
    std::map<std::string, std::size_t> index;
    for (const Hyperedge& e : h.edges) {
        index[e.label] = tree.labels.size();
        tree.labels.push_back(e.label);
    }
    // Rule-2 removals order the edges; each removed edge hangs off the edge
    // that subsumed it. An edge removed with no subsumer roots its connected
    // component; the roots share no vertices, so chaining them keeps every
    // vertex's nodes connected and yields one tree.
    std::vector<std::size_t> roots;
    for (const GyoStep& step : gyo.trace) {
        if (step.kind != GyoStep::Kind::RemoveEdge) continue;
        if (step.into.empty())
            roots.push_back(index.at(step.edge));
        else
            tree.edges.emplace_back(index.at(step.edge), index.at(step.into));
    }
    for (std::size_t i = 1; i < roots.size(); ++i)
        tree.edges.emplace_back(roots[i - 1], roots[i]);
    return tree;
}

bool is_valid_join_tree(const Hypergraph& h, const JoinTree& tree) {
    if (tree.labels.size() != h.edges.size()) return false;
    std::set<std::string> labels(tree.labels.begin(), tree.labels.end());
    if (labels.size() != h.edges.size()) return false;
    for (const Hyperedge& e : h.edges) {
        if (!labels.count(e.label)) return false;
    }
    if (!tree.labels.empty() && tree.edges.size() + 1 != tree.labels.size()) return false;

    // Adjacency + acyclicity/connectivity via union-find.
    std::vector<std::size_t> parent(tree.labels.size());
    for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (auto [a, b] : tree.edges) {
        if (a >= tree.labels.size() || b >= tree.labels.size()) return false;
        std::size_t ra = find(a);
        std::size_t rb = find(b);
        if (ra == rb) return false;
        parent[ra] = rb;
    }

    // Per-vertex connectivity: the nodes whose edge contains v must form a
    // connected subtree.
    std::vector<std::vector<std::size_t>> adjacent(tree.labels.size());
    for (auto [a, b] : tree.edges) {
        adjacent[a].push_back(b);
        adjacent[b].push_back(a);
    }
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < tree.labels.size(); ++i) index[tree.labels[i]] = i;
    for (const std::string& v : h.vertices) {
        std::vector<bool> holds(tree.labels.size(), false);
        std::size_t count = 0;
        for (const Hyperedge& e : h.edges) {
            if (std::binary_search(e.vertices.begin(), e.vertices.end(), v)) {
                holds[index.at(e.label)] = true;
                ++count;
            }
        }
        if (count == 0) return false;
        std::size_t start = 0;
        while (!holds[start]) ++start;
        std::vector<std::size_t> stack{start};
        std::vector<bool> seen(tree.labels.size(), false);
        seen[start] = true;
        std::size_t reached = 1;
        while (!stack.empty()) {
            std::size_t n = stack.back();
            stack.pop_back();
            for (std::size_t m : adjacent[n]) {
                if (!seen[m] && holds[m]) {
                    seen[m] = true;
                    ++reached;
                    stack.push_back(m);
                }
            }
        }
        if (reached != count) return false;
    }
    return true;
}

namespace {

void require_vertex_cap(const Hypergraph& h, const char* op) {
    if (h.vertices.size() > kVertexCap)
        throw SizeLimitExceeded(std::string(op) + " capped at " +
                                std::to_string(kVertexCap) + " vertices, got " +
                                std::to_string(h.vertices.size()));
}

}  // namespace

bool is_conformal(const Hypergraph& h) {
    require_vertex_cap(h, "is_conformal");
    std::size_t n = h.vertices.size();
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcount(mask)) < 3) continue;
        VertexSet s;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (1u << i)) s.push_back(h.vertices[i]);
        }
        SetFamily want;
        for (std::size_t i = 0; i < s.size(); ++i) {
            VertexSet member;
            for (std::size_t j = 0; j < s.size(); ++j) {
                if (j != i) member.push_back(s[j]);
            }
            want.push_back(std::move(member));
        }
        std::sort(want.begin(), want.end());
        if (minimisation(induced_set(h, s)) == want) return false;
    }
    return true;
}

bool is_cycle_free(const Hypergraph& h) {
    require_vertex_cap(h, "is_cycle_free");
    std::size_t n = h.vertices.size();
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        std::size_t size = static_cast<std::size_t>(__builtin_popcount(mask));
        if (size < 3) continue;
        VertexSet s;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (1u << i)) s.push_back(h.vertices[i]);
        }
        SetFamily family = minimisation(induced_set(h, s));
        // The family matches some ordering {{x1,x2},...,{xn,x1}} exactly when
        // it is a single cycle of 2-element edges covering S.
        if (family.size() != size) continue;
        bool pairs = std::all_of(family.begin(), family.end(),
                                 [](const VertexSet& m) { return m.size() == 2; });
        if (!pairs) continue;
        std::map<std::string, std::vector<std::string>> adjacent;
        bool degree_ok = true;
        for (const VertexSet& m : family) {
            adjacent[m[0]].push_back(m[1]);
            adjacent[m[1]].push_back(m[0]);
        }
        for (const std::string& v : s) {
            if (adjacent[v].size() != 2) {
                degree_ok = false;
                break;
            }
        }
        if (!degree_ok) continue;
        // Connected 2-regular graph on |S| vertices with |S| edges = one cycle.
        std::set<std::string> seen{s.front()};
        std::vector<std::string> stack{s.front()};
        while (!stack.empty()) {
            std::string v = stack.back();
            stack.pop_back();
            for (const std::string& w : adjacent[v]) {
                if (seen.insert(w).second) stack.push_back(w);
            }
        }
        if (seen.size() == size) return false;
    }
    return true;
}

bool is_valid_berge_cycle(const Hypergraph& h, const BergeCycle& cycle) {
    std::size_t n = cycle.length();
    if (n < 2 || cycle.vertices.size() != n) return false;
    std::set<std::string> edge_set(cycle.edge_labels.begin(), cycle.edge_labels.end());
    std::set<std::string> vertex_set(cycle.vertices.begin(), cycle.vertices.end());
    if (edge_set.size() != n || vertex_set.size() != n) return false;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& e = h.edges[h.edge_index(cycle.edge_labels[i])].vertices;
        const auto& f = h.edges[h.edge_index(cycle.edge_labels[(i + 1) % n])].vertices;
        const std::string& v = cycle.vertices[i];
        if (!std::binary_search(e.begin(), e.end(), v)) return false;
        if (!std::binary_search(f.begin(), f.end(), v)) return false;
    }
    return true;
}

namespace {

struct BergeSearch {
    const Hypergraph& h;
    std::size_t min_len;
    std::size_t max_len;
    std::vector<std::size_t> edge_path;
    std::vector<std::string> vertex_path;
    std::set<std::size_t> used_edges;
    std::set<std::string> used_vertices;

    BergeSearch(const Hypergraph& hg, std::size_t lo, std::size_t hi)
        : h(hg), min_len(lo), max_len(hi) {}

    bool extend() {
        std::size_t current = edge_path.back();
        const Hyperedge& e = h.edges[current];
        const Hyperedge& start = h.edges[edge_path.front()];
        for (const std::string& v : e.vertices) {
            if (used_vertices.count(v)) continue;
            // Close the cycle back at the starting edge.
            if (edge_path.size() >= min_len &&
                std::binary_search(start.vertices.begin(), start.vertices.end(), v)) {
                vertex_path.push_back(v);
                return true;
            }
            if (edge_path.size() == max_len) continue;
            for (std::size_t j = 0; j < h.edges.size(); ++j) {
                if (used_edges.count(j)) continue;
                const Hyperedge& next = h.edges[j];
                if (!std::binary_search(next.vertices.begin(), next.vertices.end(), v)) continue;
                vertex_path.push_back(v);
                used_vertices.insert(v);
                edge_path.push_back(j);
                used_edges.insert(j);
                if (extend()) return true;
                used_edges.erase(j);
                edge_path.pop_back();
                used_vertices.erase(v);
                vertex_path.pop_back();
            }
        }
        return false;
    }
};

}  // namespace

std::optional<BergeCycle> find_berge_cycle(const Hypergraph& h, std::size_t min_len,
                                           std::size_t max_len) {
    if (min_len < 2) throw Error("Berge cycles have length >= 2");
    for (std::size_t start = 0; start < h.edges.size(); ++start) {
        BergeSearch search(h, min_len, max_len);
        search.edge_path.push_back(start);
        search.used_edges.insert(start);
        if (search.extend()) {
            BergeCycle cycle;
            for (std::size_t i : search.edge_path) cycle.edge_labels.push_back(h.edges[i].label);
            cycle.vertices = search.vertex_path;
            return cycle;
        }
    }
    return std::nullopt;
}

bool is_iota_acyclic(const Hypergraph& h) {
    return !find_berge_cycle(h, 3).has_value();
}

bool is_gamma_acyclic(const Hypergraph& h) {
    if (!is_cycle_free(h)) return false;
    // No x, y, z inducing all of {x,y}, {x,z}, {x,y,z}.
    std::size_t n = h.vertices.size();
    for (std::size_t xi = 0; xi < n; ++xi) {
        for (std::size_t yi = 0; yi < n; ++yi) {
            for (std::size_t zi = 0; zi < n; ++zi) {
                if (xi == yi || xi == zi || yi == zi) continue;
                const std::string& x = h.vertices[xi];
                const std::string& y = h.vertices[yi];
                const std::string& z = h.vertices[zi];
                VertexSet s{x, y, z};
                std::sort(s.begin(), s.end());
                SetFamily induced = induced_set(h, s);
                auto has = [&](VertexSet member) {
                    std::sort(member.begin(), member.end());
                    return std::binary_search(induced.begin(), induced.end(), member);
                };
                if (has({x, y}) && has({x, z}) && has({x, y, z})) return false;
            }
        }
    }
    return true;
}

bool is_berge_acyclic(const Hypergraph& h) {
    return !find_berge_cycle(h, 2).has_value();
}

Hypergraph drop_singleton_vertices(const Hypergraph& h) {
    std::map<std::string, std::size_t> occurrences;
    for (const Hyperedge& e : h.edges) {
        for (const std::string& v : e.vertices) ++occurrences[v];
    }
    std::vector<Hyperedge> edges;
    for (const Hyperedge& e : h.edges) {
        Hyperedge out;
        out.label = e.label;
        for (const std::string& v : e.vertices) {
            if (occurrences[v] > 1) out.vertices.push_back(v);
        }
        if (!out.vertices.empty()) edges.push_back(std::move(out));
    }
    return make_hypergraph(std::move(edges));
}

namespace {

/** Vertex invariant used to cut the permutation space: isomorphisms preserve it. */
std::string vertex_signature(const Hypergraph& h, const std::string& v) {
    std::vector<std::size_t> edge_sizes;
    std::vector<std::size_t> co_degrees;
    for (const Hyperedge& e : h.edges) {
        if (!std::binary_search(e.vertices.begin(), e.vertices.end(), v)) continue;
        edge_sizes.push_back(e.vertices.size());
        for (const std::string& w : e.vertices) {
            if (w != v) co_degrees.push_back(h.degree(w));
        }
    }
    std::sort(edge_sizes.begin(), edge_sizes.end());
    std::sort(co_degrees.begin(), co_degrees.end());
    std::ostringstream out;
    out << edge_sizes.size() << "|";
    for (auto s : edge_sizes) out << s << ",";
    out << "|";
    for (auto d : co_degrees) out << d << ",";
    return out.str();
}

std::string render(const Hypergraph& h, const std::map<std::string, std::size_t>& rank) {
    std::vector<std::vector<std::size_t>> edges;
    for (const Hyperedge& e : h.edges) {
        std::vector<std::size_t> m;
        for (const std::string& v : e.vertices) m.push_back(rank.at(v));
        std::sort(m.begin(), m.end());
        edges.push_back(std::move(m));
    }
    std::sort(edges.begin(), edges.end());
    std::ostringstream out;
    for (const auto& e : edges) {
        for (std::size_t r : e) out << r << ".";
        out << ";";
    }
    return out.str();
}

}  // namespace

std::string canonical_form(const Hypergraph& h) {
    require_vertex_cap(h, "canonical_form");

    std::map<std::string, std::vector<std::string>> classes;
    for (const std::string& v : h.vertices) classes[vertex_signature(h, v)].push_back(v);

    std::vector<std::vector<std::string>> groups;
    double permutations = 1;
    for (auto& [sig, members] : classes) {
        std::sort(members.begin(), members.end());
        for (std::size_t i = 2; i <= members.size(); ++i) permutations *= static_cast<double>(i);
        groups.push_back(members);
    }
    if (permutations > 1e7)
        throw SizeLimitExceeded("canonical_form permutation space too large");

    std::string best;
    std::map<std::string, std::size_t> rank;
    // Ranks are blocked per class so cross-class swaps (never isomorphisms)
    // are skipped; within each class all orders are tried.
    std::size_t base = 0;
    std::vector<std::size_t> bases;
    for (const auto& g : groups) {
        bases.push_back(base);
        base += g.size();
    }
    auto assign = [&](std::size_t gi) {
        for (std::size_t i = 0; i < groups[gi].size(); ++i) rank[groups[gi][i]] = bases[gi] + i;
    };
    for (std::size_t gi = 0; gi < groups.size(); ++gi) assign(gi);

    std::vector<std::vector<std::string>> work = groups;
    auto recurse = [&](auto&& self, std::size_t gi) -> void {
        if (gi == work.size()) {
            std::string form = render(h, rank);
            if (best.empty() || form < best) best = form;
            return;
        }
        std::sort(work[gi].begin(), work[gi].end());
        do {
            for (std::size_t i = 0; i < work[gi].size(); ++i) rank[work[gi][i]] = bases[gi] + i;
            self(self, gi + 1);
        } while (std::next_permutation(work[gi].begin(), work[gi].end()));
    };
    recurse(recurse, 0);
    return best;
}

bool isomorphic(const Hypergraph& a, const Hypergraph& b) {
    if (a.vertices.size() != b.vertices.size() || a.edges.size() != b.edges.size()) return false;
    return canonical_form(a) == canonical_form(b);
}

std::vector<std::vector<std::size_t>> isomorphism_classes(const std::vector<Hypergraph>& hs) {
    std::vector<std::vector<std::size_t>> groups;
    std::map<std::string, std::size_t> by_form;
    for (std::size_t i = 0; i < hs.size(); ++i) {
        std::string form = std::to_string(hs[i].vertices.size()) + "#" + canonical_form(hs[i]);
        auto [it, inserted] = by_form.emplace(form, groups.size());
        if (inserted) groups.emplace_back();
        groups[it->second].push_back(i);
    }
    return groups;
}

}  // namespace ijq
