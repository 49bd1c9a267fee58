#include "doctest.h"

#include "ijq/acyclicity.hpp"
#include "ijq/errors.hpp"
#include "ijq/parser.hpp"
#include "ijq/reduction.hpp"
#include "ijq/widths.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

using namespace ijq;

namespace {

Hypergraph graph(std::vector<Hyperedge> edges) {
    for (Hyperedge& e : edges) std::sort(e.vertices.begin(), e.vertices.end());
    return make_hypergraph(std::move(edges));
}

Hypergraph triangle() {
    return graph({{"R", {"A", "B"}}, {"S", {"B", "C"}}, {"T", {"A", "C"}}});
}

Hypergraph random_graph(std::mt19937_64& rng, std::size_t max_vertices,
                        std::size_t max_edges) {
    std::uniform_int_distribution<std::size_t> nv(2, max_vertices);
    std::uniform_int_distribution<std::size_t> ne(1, max_edges);
    std::size_t vertices = nv(rng);
    std::size_t edges = ne(rng);
    std::vector<Hyperedge> out;
    for (std::size_t i = 0; i < edges; ++i) {
        Hyperedge e;
        e.label = "e" + std::to_string(i);
        for (std::size_t v = 0; v < vertices; ++v) {
            if (rng() % 2 == 0) e.vertices.push_back("v" + std::to_string(v));
        }
        if (e.vertices.empty()) e.vertices.push_back("v" + std::to_string(rng() % vertices));
        out.push_back(std::move(e));
    }
    return make_hypergraph(std::move(out));
}

Database empty_db(const Query& q) {
    Database db;
    for (const Atom& atom : q.atoms) db.relations[atom.label] = Relation{atom.label, atom.schema, {}};
    return db;
}

bool edge_has(const Hyperedge& e, const std::string& v) {
    return std::binary_search(e.vertices.begin(), e.vertices.end(), v);
}

/** Smallest number of edges whose union contains the target, by enumeration. */
std::size_t integral_cover_size(const Hypergraph& h, const VertexSet& target) {
    const std::size_t m = h.edges.size();
    std::size_t best = m + 1;
    for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
        std::size_t size = 0;
        bool covers = true;
        for (const std::string& v : target) {
            bool hit = false;
            for (std::size_t e = 0; e < m; ++e)
                if ((mask >> e & 1) && edge_has(h.edges[e], v)) hit = true;
            if (!hit) {
                covers = false;
                break;
            }
        }
        for (std::size_t e = 0; e < m; ++e) size += mask >> e & 1;
        if (covers) best = std::min(best, size);
    }
    return best;
}

/** The member of the triangle reduction whose first atom keeps both splits. */
Hypergraph wide_triangle_member() {
    return graph({{"R_{2;2}", {"A1", "A2", "B1", "B2"}},
                  {"S_{1;2}", {"B1", "C1", "C2"}},
                  {"T_{1;1}", {"A1", "C1"}}});
}

const char* kTriangle = "R([A],[B]), S([B],[C]), T([A],[C])";
const char* kStaggered = "R([A],[B],[C]), S([B],[C]), T([A],[B])";

}  // namespace

TEST_SUITE("widths") {

TEST_CASE("cover of a single edge is the edge itself") {
    Hypergraph h = graph({{"R", {"A", "B"}}});
    EdgeCover cover = fractional_edge_cover(h, {"A", "B"});
    CHECK(cover.value == 1);
    CHECK(cover.weights == std::map<std::string, Rational>{{"R", 1}});
}

TEST_CASE("cover of the triangle splits every edge in half") {
    EdgeCover cover = fractional_edge_cover(triangle(), {"A", "B", "C"});
    CHECK(cover.value == Rational(3) / 2);
    REQUIRE(cover.weights.size() == 3);
    for (const auto& [label, w] : cover.weights) CHECK(w == Rational(1) / 2);
}

TEST_CASE("cover respects the target subset") {
    Hypergraph h = triangle();
    CHECK(fractional_edge_cover(h, {}).value == 0);
    CHECK(fractional_edge_cover(h, {"A"}).value == 1);
    CHECK(fractional_edge_cover(h, {"A", "B"}).value == 1);
    EdgeCover pair = fractional_edge_cover(h, {"A", "C"});
    CHECK(pair.value == 1);
    // A path needs one full edge per endpoint.
    Hypergraph path = graph({{"R", {"A", "B"}}, {"S", {"B", "C"}}});
    CHECK(fractional_edge_cover(path, {"A", "B", "C"}).value == 2);
}

TEST_CASE("cover of a clique on k vertices is k halves") {
    std::vector<Hyperedge> edges;
    std::vector<std::string> vertices;
    for (int k = 3; k <= 5; ++k) {
        edges.clear();
        vertices.clear();
        for (int i = 0; i < k; ++i) vertices.push_back("v" + std::to_string(i));
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j)
                edges.push_back({vertices[i] + vertices[j], {vertices[i], vertices[j]}});
        EdgeCover cover = fractional_edge_cover(graph(edges), vertices);
        CHECK(cover.value == Rational(k) / 2);
    }
}

TEST_CASE("cover of all-but-one subsets needs a third of each edge") {
    // Four ternary edges, each omitting one of four vertices.
    Hypergraph h = graph({{"R", {"A", "B", "C"}},
                          {"S", {"B", "C", "D"}},
                          {"T", {"C", "D", "A"}},
                          {"U", {"D", "A", "B"}}});
    EdgeCover cover = fractional_edge_cover(h, {"A", "B", "C", "D"});
    CHECK(cover.value == Rational(4) / 3);
}

TEST_CASE("cover of a star pays one edge per leaf") {
    Hypergraph h = graph({{"R", {"c", "l1"}}, {"S", {"c", "l2"}}, {"T", {"c", "l3"}}});
    CHECK(fractional_edge_cover(h, h.vertices).value == 3);
}

TEST_CASE("cover rejects vertices outside every edge") {
    CHECK_THROWS_AS((void)fractional_edge_cover(triangle(), {"A", "Z"}), UncoverableVertex);
}

TEST_CASE("random covers are feasible, bounded, and monotone") {
    std::mt19937_64 rng(417031);
    for (int trial = 0; trial < 120; ++trial) {
        Hypergraph h = random_graph(rng, 6, 5);
        VertexSet target;
        for (const std::string& v : h.vertices)
            if (trial % 2 == 0 || rng() % 4 != 0) target.push_back(v);

        EdgeCover cover = fractional_edge_cover(h, target);
        Rational total = 0;
        std::size_t max_edge = 1;
        for (const Hyperedge& e : h.edges) max_edge = std::max(max_edge, e.vertices.size());
        REQUIRE(cover.weights.size() == h.edges.size());
        for (const auto& [label, w] : cover.weights) {
            CHECK(w >= 0);
            total += w;
        }
        CHECK(total == cover.value);
        for (const std::string& v : target) {
            Rational covered = 0;
            for (const Hyperedge& e : h.edges)
                if (edge_has(e, v)) covered += cover.weights.at(e.label);
            CHECK(covered >= 1);
        }

        // Sandwiched between the uniform dual bound and the best integral cover.
        CHECK(cover.value >= Rational(static_cast<int>(target.size())) / static_cast<int>(max_edge));
        CHECK(cover.value <= Rational(static_cast<int>(integral_cover_size(h, target))));

        if (!target.empty()) {
            VertexSet smaller(target.begin() + 1, target.end());
            CHECK(fractional_edge_cover(h, smaller).value <= cover.value);
        }
    }
}

TEST_CASE("decomposition validity catches each defect") {
    Hypergraph h = triangle();
    CHECK(is_valid_decomposition(h, {{{"A", "B", "C"}}, {}}));

    // Edge indices out of range or looping back.
    CHECK_FALSE(is_valid_decomposition(h, {{{"A", "B", "C"}}, {{0, 1}}}));
    CHECK_FALSE(is_valid_decomposition(h, {{{"A", "B", "C"}, {"A", "B", "C"}}, {{0, 0}}}));

    // Wrong edge count or a disconnected tree.
    CHECK_FALSE(is_valid_decomposition(h, {{{"A", "B", "C"}, {"A", "B", "C"}}, {}}));
    Hypergraph path = graph({{"R", {"A", "B"}}, {"S", {"B", "C"}}, {"U", {"C", "D"}}, {"V", {"D", "E"}}});
    CHECK(is_valid_decomposition(
        path, {{{"A", "B"}, {"B", "C"}, {"C", "D"}, {"D", "E"}}, {{0, 1}, {1, 2}, {2, 3}}}));
    CHECK_FALSE(is_valid_decomposition(
        path, {{{"A", "B"}, {"B", "C"}, {"C", "D"}, {"D", "E"}}, {{0, 1}, {2, 3}, {2, 3}}}));

    // An edge that fits no bag.
    CHECK_FALSE(is_valid_decomposition(h, {{{"A", "B"}}, {}}));

    // A vertex whose bags are not connected in the tree.
    Hypergraph two = graph({{"R", {"A", "B"}}, {"S", {"B", "C"}}});
    CHECK_FALSE(is_valid_decomposition(two, {{{"A", "B"}, {"A"}, {"B", "C"}}, {{0, 1}, {1, 2}}}));
    CHECK(is_valid_decomposition(two, {{{"A", "B"}, {"B"}, {"B", "C"}}, {{0, 1}, {1, 2}}}));
}

TEST_CASE("width of tree-shaped inputs is one") {
    CHECK(fhtw(graph({{"R", {"A", "B"}}})).value == 1);
    CHECK(fhtw(graph({{"R", {"A", "B"}}, {"S", {"B", "C"}}})).value == 1);
    // A covering edge flattens the triangle.
    Hypergraph covered = graph({{"R", {"A", "B"}},
                                {"S", {"B", "C"}},
                                {"T", {"A", "C"}},
                                {"U", {"A", "B", "C"}}});
    CHECK(fhtw(covered).value == 1);
    // Identical schemas collapse onto one bag.
    Hypergraph stacked = graph(
        {{"R", {"A", "B", "C"}}, {"S", {"A", "B", "C"}}, {"T", {"A", "B", "C"}}});
    CHECK(fhtw(stacked).value == 1);
}

TEST_CASE("width of the triangle is three halves") {
    FhtwResult result = fhtw(triangle());
    CHECK(result.value == Rational(3) / 2);
    CHECK(is_valid_decomposition(triangle(), result.witness));
}

TEST_CASE("width of the four-cycle is two") {
    Hypergraph h = graph(
        {{"R", {"A", "B"}}, {"S", {"B", "C"}}, {"T", {"C", "D"}}, {"U", {"A", "D"}}});
    CHECK(fhtw(h).value == 2);
}

TEST_CASE("width computation refuses oversized inputs") {
    Hyperedge big;
    big.label = "R";
    for (int i = 0; i < 11; ++i) big.vertices.push_back("v" + std::to_string(i));
    CHECK_THROWS_AS((void)fhtw(graph({big})), SizeLimitExceeded);
}

TEST_CASE("a three-bag decomposition certifies the wide triangle member") {
    Hypergraph h = wide_triangle_member();
    TreeDecomposition td{{{"A1", "A2", "B1", "B2"}, {"A1", "B1", "C1"}, {"B1", "C1", "C2"}},
                         {{0, 1}, {1, 2}}};
    REQUIRE(is_valid_decomposition(h, td));
    CHECK(fractional_edge_cover(h, td.bags[0]).value == 1);
    CHECK(fractional_edge_cover(h, td.bags[1]).value == Rational(3) / 2);
    CHECK(fractional_edge_cover(h, td.bags[2]).value == 1);

    FhtwResult result = fhtw(h);
    CHECK(result.value == Rational(3) / 2);
    CHECK(is_valid_decomposition(h, result.witness));
}

TEST_CASE("every resolved triangle member has width three halves") {
    Query q = parse_query(kTriangle);
    ReductionOutput out = reduce_full(q, empty_db(q));
    REQUIRE(out.queries.size() == 8);
    for (const Query& member : out.queries) CHECK(fhtw(hypergraph_of(member)).value == Rational(3) / 2);
    CHECK(ijw_fhtw_upper(hypergraph_of(q)) == Rational(3) / 2);
}

TEST_CASE("staggered ternary reduction keeps one hard case") {
    Query q = parse_query(kStaggered);
    ReductionOutput out = reduce_full(q, empty_db(q));
    CHECK(out.queries.size() == 24);
    std::vector<Query> cases = simplify(out.queries);
    REQUIRE(cases.size() == 3);
    std::multiset<Rational> widths;
    for (const Query& c : cases) widths.insert(fhtw(hypergraph_of(c)).value);
    CHECK(widths == std::multiset<Rational>{1, 1, Rational(3) / 2});
    CHECK(ijw_fhtw_upper(hypergraph_of(q)) == Rational(3) / 2);
}

TEST_CASE("resolved width bound collapses to one on nested and forked shapes") {
    Query forked = parse_query("R([A],[B]), S([A],[C]), T([C],[D]), T([C],[E])");
    CHECK(ijw_fhtw_upper(hypergraph_of(forked)) == 1);
    Query nested = parse_query("R([A],[B],[C]), S([A],[B])");
    CHECK(ijw_fhtw_upper(hypergraph_of(nested)) == 1);
    CHECK(ijw_fhtw_upper(graph({{"R", {"A", "B"}}, {"S", {"B", "C"}}})) == 1);
}

TEST_CASE("width one coincides with acyclicity") {
    std::mt19937_64 rng(52418);
    for (int trial = 0; trial < 80; ++trial) {
        Hypergraph h = random_graph(rng, 6, 5);
        FhtwResult result = fhtw(h);
        CHECK(is_valid_decomposition(h, result.witness));
        Rational worst = 0;
        for (const VertexSet& bag : result.witness.bags)
            worst = std::max(worst, fractional_edge_cover(h, bag).value);
        CHECK(worst == result.value);
        CHECK((result.value == 1) == is_alpha_acyclic(h));
        CHECK(result.value >= 1);
    }
}

TEST_CASE("count prediction matches the closed forms") {
    auto counts = [](const char* text) {
        return predict_counts(hypergraph_of(parse_query(text)));
    };

    CountPrediction tri = counts(kTriangle);
    CHECK(tri.queries == 8);
    CHECK(tri.variants == std::map<std::string, Int>{{"R", 4}, {"S", 4}, {"T", 4}});

    CountPrediction stacked = counts("R([A],[B],[C]), S([A],[B],[C]), T([A],[B],[C])");
    CHECK(stacked.queries == 216);
    CHECK(stacked.variants == std::map<std::string, Int>{{"R", 27}, {"S", 27}, {"T", 27}});

    CountPrediction pendant = counts("R([A],[B],[C]), S([A],[B],[C]), T([A])");
    CHECK(pendant.queries == 24);
    CHECK(pendant.variants == std::map<std::string, Int>{{"R", 12}, {"S", 12}, {"T", 3}});

    CountPrediction forked = counts("R([A],[B]), S([A],[C]), T([C],[D]), T([C],[E])");
    CHECK(forked.queries == 12);
    CHECK(forked.variants ==
          std::map<std::string, Int>{{"R", 2}, {"S", 6}, {"T#1", 3}, {"T#2", 3}});

    CountPrediction nested = counts("R([A],[B],[C]), S([A],[B])");
    CHECK(nested.queries == 4);
    CHECK(nested.variants == std::map<std::string, Int>{{"R", 4}, {"S", 4}});

    CountPrediction lone = counts("R([A],[B])");
    CHECK(lone.queries == 1);
    CHECK(lone.variants == std::map<std::string, Int>{{"R", 1}});
}

TEST_CASE("count prediction agrees with the executed reduction") {
    for (const char* text : {kTriangle, "R([A],[B]), S([A],[C]), T([C],[D]), T([C],[E])"}) {
        Query q = parse_query(text);
        CountPrediction predicted = predict_counts(hypergraph_of(q));
        ReductionOutput out = reduce_full(q, empty_db(q));
        CHECK(Int(out.queries.size()) == predicted.queries);

        std::map<std::string, Int> produced;
        for (const auto& [label, rel] : out.database.relations)
            produced[ReducedRelationKey::parse(label).base] += 1;
        CHECK(produced == predicted.variants);
    }
}

}  // TEST_SUITE
