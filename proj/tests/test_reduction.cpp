#include "doctest.h"

#include "ijq/acyclicity.hpp"
#include "ijq/errors.hpp"
#include "ijq/eval.hpp"
#include "ijq/parser.hpp"
#include "ijq/reduction.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

using namespace ijq;

namespace {

Interval iv(int l, int r) { return make_interval(Rational(l), Rational(r)); }

Database empty_db(const Query& q) {
    Database db;
    for (const Atom& atom : q.atoms) db.relations[atom.label] = Relation{atom.label, atom.schema, {}};
    return db;
}

/** Random rows for every atom: small integer intervals and points. */
Database random_db(std::mt19937_64& rng, const Query& q, std::size_t max_rows,
                   int lo, int hi) {
    std::uniform_int_distribution<int> value(lo, hi);
    std::uniform_int_distribution<std::size_t> rows(1, max_rows);
    Database db;
    for (const Atom& atom : q.atoms) {
        Relation rel{atom.label, atom.schema, {}};
        std::size_t n = rows(rng);
        for (std::size_t r = 0; r < n; ++r) {
            Tuple t;
            for (const Variable& v : atom.schema) {
                if (v.kind == VarKind::Interval) {
                    int a = value(rng);
                    int b = value(rng);
                    t.push_back(Value{iv(std::min(a, b), std::max(a, b))});
                } else {
                    t.push_back(Value{Rational(value(rng))});
                }
            }
            rel.rows.push_back(std::move(t));
        }
        db.relations[atom.label] = std::move(rel);
    }
    return db;
}

std::vector<std::string> formatted(const std::vector<Query>& queries) {
    std::vector<std::string> out;
    for (const Query& q : queries) out.push_back(format_query(q));
    std::sort(out.begin(), out.end());
    return out;
}

const char* kTriangle = "R([A],[B]), S([B],[C]), T([A],[C])";

/** Reduced labels fall outside the query grammar, so members are built by hand. */
Query triangle_member_332() {
    auto pt = [](const char* n) { return Variable{n, VarKind::Point}; };
    Query q;
    q.atoms.push_back(Atom{"R_{2;1}", {pt("A1"), pt("A2"), pt("B1")}});
    q.atoms.push_back(Atom{"S_{2;2}", {pt("B1"), pt("B2"), pt("C1"), pt("C2")}});
    q.atoms.push_back(Atom{"T_{1;1}", {pt("A1"), pt("C1")}});
    return q;
}

}  // namespace

TEST_SUITE("reduction") {

TEST_CASE("fresh names avoid collisions") {
    CHECK(fresh_point_names("A", 2, {}) == std::vector<std::string>{"A1", "A2"});
    CHECK(fresh_point_names("A", 1, {"B1"}) == std::vector<std::string>{"A1"});
    std::vector<std::string> dodged = fresh_point_names("A", 2, {"A2"});
    CHECK(dodged.size() == 2);
    for (const std::string& n : dodged) CHECK(n != "A2");
}

TEST_CASE("reduced relation keys render and parse") {
    ReducedRelationKey key{"R", {{"A", 2}, {"B", 1}}};
    CHECK(key.render() == "R_{2;1}");
    ReducedRelationKey back = ReducedRelationKey::parse("R_{2;1}");
    CHECK(back.base == "R");
    REQUIRE(back.positions.size() == 2);
    CHECK(back.positions[0].second == 2);
    CHECK(back.positions[1].second == 1);

    CHECK(ReducedRelationKey{"R", {}}.render() == "R");
    CHECK(ReducedRelationKey::parse("R").base == "R");
    CHECK(ReducedRelationKey::parse("R").positions.empty());
    // A base label that merely contains underscores or braces stays intact.
    CHECK(ReducedRelationKey::parse("My_Rel").base == "My_Rel");
    CHECK(ReducedRelationKey::parse("R_{x}").base == "R_{x}");
    CHECK(ReducedRelationKey::parse("T#1_{2}").base == "T#1");
}

TEST_CASE("one step on the triangle hypergraph") {
    Hypergraph h = hypergraph_of(parse_query(kTriangle));
    Hypergraph out = onestep_hypergraph(h, "A", {"R", "T"});
    REQUIRE(out.edges.size() == 3);
    CHECK(out.edges[0].label == "R");
    CHECK(out.edges[0].vertices == std::vector<std::string>{"A1", "B"});
    CHECK(out.edges[1].vertices == std::vector<std::string>{"B", "C"});
    CHECK(out.edges[2].label == "T");
    CHECK(out.edges[2].vertices == std::vector<std::string>{"A1", "A2", "C"});
    CHECK_THROWS_AS((void)onestep_hypergraph(h, "A", {"R", "S"}), Error);
    CHECK_THROWS_AS((void)onestep_hypergraph(h, "A", {"R"}), Error);
}

TEST_CASE("one step on the triangle query") {
    Query q = parse_query(kTriangle);
    Query out = onestep_query(q, "A", {"R", "T"});
    CHECK(format_query(out) == "R_{1}(A1,[B]), S([B],[C]), T_{2}(A1,A2,[C])");
    CHECK(out.kind_of("A1") == VarKind::Point);
    CHECK(out.kind_of("B") == VarKind::Interval);

    std::vector<Query> all = onestep_query_all(q, "A");
    REQUIRE(all.size() == 2);
    CHECK(format_query(all[0]) == "R_{1}(A1,[B]), S([B],[C]), T_{2}(A1,A2,[C])");
    CHECK(format_query(all[1]) == "R_{2}(A1,A2,[B]), S([B],[C]), T_{1}(A1,[C])");

    CHECK_THROWS_AS((void)onestep_query(q, "B", {"R", "T"}), Error);
}

TEST_CASE("bitstring splits enumerate compositions") {
    auto splits = bitstring_splits("01", 2);
    std::set<std::vector<std::string>> got(splits.begin(), splits.end());
    CHECK(got == std::set<std::vector<std::string>>{
                     {"", "01"}, {"0", "1"}, {"01", ""}});

    CHECK(bitstring_splits("011", 1) ==
          std::vector<std::vector<std::string>>{{"011"}});
    CHECK(bitstring_splits("", 3).size() == 1);

    // Length 3 into 3 parts: one cut pair of 10 possibilities.
    auto three = bitstring_splits("011", 3);
    CHECK(three.size() == 10);
    std::set<std::vector<std::string>> distinct(three.begin(), three.end());
    CHECK(distinct.size() == three.size());
    for (const auto& parts : three) {
        std::string joined;
        for (const std::string& p : parts) joined += p;
        CHECK(joined == "011");
        CHECK(parts.size() == 3);
    }
}

TEST_CASE("triangle reduction emits the eight member queries") {
    Query q = parse_query(kTriangle);
    ReductionOutput out = reduce_full(q, empty_db(q));
    REQUIRE(out.queries.size() == 8);
    CHECK(out.hypergraphs.size() == 8);

    std::vector<std::string> expect{
        "R_{1;1}(A1,B1), S_{2;1}(B1,B2,C1), T_{2;2}(A1,A2,C1,C2)",
        "R_{1;1}(A1,B1), S_{2;2}(B1,B2,C1,C2), T_{2;1}(A1,A2,C1)",
        "R_{1;2}(A1,B1,B2), S_{1;1}(B1,C1), T_{2;2}(A1,A2,C1,C2)",
        "R_{1;2}(A1,B1,B2), S_{1;2}(B1,C1,C2), T_{2;1}(A1,A2,C1)",
        "R_{2;1}(A1,A2,B1), S_{2;1}(B1,B2,C1), T_{1;2}(A1,C1,C2)",
        "R_{2;1}(A1,A2,B1), S_{2;2}(B1,B2,C1,C2), T_{1;1}(A1,C1)",
        "R_{2;2}(A1,A2,B1,B2), S_{1;1}(B1,C1), T_{1;2}(A1,C1,C2)",
        "R_{2;2}(A1,A2,B1,B2), S_{1;2}(B1,C1,C2), T_{1;1}(A1,C1)",
    };
    CHECK(formatted(out.queries) == expect);

    // Every member is an equality join over point variables only.
    for (const Query& member : out.queries)
        CHECK(member.classify() == QueryClass::EqualityJoin);

    // All eight collapse to one query once singleton variables are gone.
    std::vector<Query> collapsed = simplify(out.queries);
    REQUIRE(collapsed.size() == 1);
    std::set<std::string> names;
    for (const Atom& atom : collapsed[0].atoms)
        for (const Variable& v : atom.schema) names.insert(v.name);
    CHECK(names == std::set<std::string>{"A1", "B1", "C1"});
}

TEST_CASE("member counts match the factorial product") {
    auto raw_count = [](const char* text) {
        Query q = parse_query(text);
        return reduce_full(q, empty_db(q)).queries.size();
    };
    auto simplified_count = [](const char* text) {
        Query q = parse_query(text);
        return simplify(reduce_full(q, empty_db(q)).queries).size();
    };

    CHECK(raw_count("R([A],[B],[C]), S([A],[B],[C]), T([A],[B],[C])") == 216);
    CHECK(simplified_count("R([A],[B],[C]), S([A],[B],[C]), T([A],[B],[C])") == 27);

    CHECK(raw_count("R([A],[B],[C]), S([A],[B],[C]), T([A],[B])") == 72);
    CHECK(simplified_count("R([A],[B],[C]), S([A],[B],[C]), T([A],[B])") == 9);

    CHECK(raw_count("R([A],[B],[C]), S([B],[C]), T([A],[B])") == 24);
    CHECK(simplified_count("R([A],[B],[C]), S([B],[C]), T([A],[B])") == 3);

    CHECK(raw_count("R([A],[B],[C]), S([A],[B],[C]), T([A])") == 24);
    CHECK(raw_count("R([A],[B]), S([A],[C]), T([C],[D]), T([C],[E])") == 12);
    CHECK(raw_count("R([A],[B],[C]), S([A],[B])") == 4);
}

TEST_CASE("members of resolvable-cycle-free queries are all acyclic") {
    for (const char* text : {"R([A],[B],[C]), S([A],[B],[C]), T([A])",
                             "R([A],[B]), S([A],[C]), T([C],[D]), T([C],[E])",
                             "R([A],[B],[C]), S([A],[B])"}) {
        Query q = parse_query(text);
        CAPTURE(text);
        CHECK(is_iota_acyclic(hypergraph_of(q)));
        for (const Query& member : reduce_full(q, empty_db(q)).queries)
            CHECK(is_alpha_acyclic(hypergraph_of(member)));
    }
}

TEST_CASE("simplified members group into isomorphism classes") {
    auto classes = [](const char* text) {
        Query q = parse_query(text);
        std::vector<Hypergraph> hs;
        for (const Query& member : simplify(reduce_full(q, empty_db(q)).queries))
            hs.push_back(drop_singleton_vertices(hypergraph_of(member)));
        return isomorphism_classes(hs).size();
    };
    CHECK(classes("R([A],[B],[C]), S([A],[B],[C]), T([A],[B],[C])") == 3);
    CHECK(classes("R([A],[B],[C]), S([A],[B],[C]), T([A],[B])") == 3);
}

TEST_CASE("tau mirrors the query expansion") {
    Query q = parse_query(kTriangle);
    std::vector<Hypergraph> hs = tau(hypergraph_of(q));
    CHECK(hs.size() == 8);
    for (const Hypergraph& h : hs) {
        REQUIRE(h.edges.size() == 3);
        CHECK(h.edges[0].label == "R");
        CHECK(h.edges[1].label == "S");
        CHECK(h.edges[2].label == "T");
    }
    CHECK(tau(hypergraph_of(parse_query("R([A],[B],[C]), S([A],[B])"))).size() == 4);
    // tau sees only the hypergraph, so every shared vertex gets resolved.
    CHECK(tau(hypergraph_of(parse_query("R(P), S(P)"))).size() == 2);
    CHECK(tau(make_hypergraph({{"R", {"A"}}, {"S", {"B"}}})).size() == 1);
}

TEST_CASE("pure equality joins pass through unchanged") {
    Query q = parse_query("R(P,X), S(P)");
    Database db;
    db.relations["R"] = Relation{"R", q.atoms[0].schema,
                                 {{Value{Rational(1)}, Value{Rational(7)}}}};
    db.relations["S"] = Relation{"S", q.atoms[1].schema, {{Value{Rational(1)}}}};
    ReductionOutput out = reduce_full(q, db);
    REQUIRE(out.queries.size() == 1);
    CHECK(out.queries[0] == q);
    CHECK(out.database.at("R").rows == db.at("R").rows);
}

TEST_CASE("unshared interval variables survive the reduction") {
    Query q = parse_query("R([X],[Y]), S([X])");
    ReductionOutput out = reduce_full(q, empty_db(q));
    REQUIRE(out.queries.size() == 2);
    for (const Query& member : out.queries) {
        CHECK(member.classify() == QueryClass::Mixed);
        CHECK(member.kind_of("Y") == VarKind::Interval);
    }
}

TEST_CASE("one step preserves the query answer") {
    Query q = parse_query("R([X],P), S([X],P)");
    std::mt19937_64 rng(91);
    for (int trial = 0; trial < 80; ++trial) {
        CAPTURE(trial);
        Database db = random_db(rng, q, 3, 0, 4);
        bool direct = oracle_eval(q, db);
        bool any = false;
        for (const auto& sigma : {std::vector<std::string>{"R", "S"},
                                  std::vector<std::string>{"S", "R"}}) {
            Query member = onestep_query(q, "X", sigma);
            Database moved = onestep_database(db, q, "X", sigma);
            if (oracle_eval(member, moved)) any = true;
        }
        CHECK(any == direct);
    }
}

TEST_CASE("full reduction preserves the query answer") {
    std::mt19937_64 rng(92);
    for (const char* text : {kTriangle, "R([X],P,[Y]), S([X],P), T([Y])"}) {
        Query q = parse_query(text);
        CAPTURE(text);
        for (int trial = 0; trial < 40; ++trial) {
            CAPTURE(trial);
            Database db = random_db(rng, q, 2, 0, 3);
            ReductionOutput out = reduce_full(q, db);
            bool direct = oracle_eval(q, db);
            bool any = false;
            for (const Query& member : out.queries) {
                if (oracle_eval(member, out.database)) any = true;
            }
            CHECK(any == direct);
        }
    }
}

TEST_CASE("trace rows point back at input rows") {
    Query q = parse_query(kTriangle);
    std::mt19937_64 rng(93);
    Database db = random_db(rng, q, 3, 0, 4);
    ReductionTrace trace = reduce_full_traced(q, db);
    CHECK(trace.output.queries.size() == 8);
    for (const auto& [label, rel] : trace.output.database.relations) {
        REQUIRE(trace.provenance.count(label));
        const std::vector<std::size_t>& sources = trace.provenance.at(label);
        REQUIRE(sources.size() == rel.rows.size());
        std::string base = ReducedRelationKey::parse(label).base;
        for (std::size_t r : sources) CHECK(r < db.at(base).rows.size());
    }
}

TEST_CASE("backward transformation inverts the reduction shape") {
    Query ij = parse_query(kTriangle);
    BackwardTargetKey target = backward_key_for(ij);
    CHECK(target.groups.at("A") == std::vector<std::string>{"A1", "A2"});
    CHECK(target.groups.at("B") == std::vector<std::string>{"B1", "B2"});
    CHECK(target.groups.at("C") == std::vector<std::string>{"C1", "C2"});

    Query ej = triangle_member_332();
    std::mt19937_64 rng(94);
    std::uniform_int_distribution<std::size_t> rows(1, 3);
    for (int trial = 0; trial < 60; ++trial) {
        CAPTURE(trial);
        Database ej_db;
        for (const Atom& atom : ej.atoms) {
            Relation rel{atom.label, atom.schema, {}};
            std::size_t n = rows(rng);
            for (std::size_t r = 0; r < n; ++r) {
                Tuple t;
                for (std::size_t c = 0; c < atom.schema.size(); ++c) {
                    std::string bits;
                    for (int b = 0; b < 3; ++b) bits += (rng() % 2) ? '1' : '0';
                    t.push_back(Value{Bitstring{bits}});
                }
                rel.rows.push_back(std::move(t));
            }
            ej_db.relations[atom.label] = std::move(rel);
        }

        auto [back_query, back_db] = backward_transform(ej, ej_db, target);
        CHECK(back_query == ij);
        for (const Atom& atom : ej.atoms) {
            std::string base = ReducedRelationKey::parse(atom.label).base;
            CHECK(back_db.at(base).rows.size() == ej_db.at(atom.label).rows.size());
        }
        CHECK(oracle_eval(ej, ej_db) == oracle_eval(ij, back_db));
    }
}

TEST_CASE("backward transformation rejects bad inputs") {
    Query ij = parse_query(kTriangle);
    BackwardTargetKey target = backward_key_for(ij);
    Query ej = triangle_member_332();

    Database mixed;
    for (const Atom& atom : ej.atoms) {
        Relation rel{atom.label, atom.schema, {}};
        Tuple t;
        for (std::size_t c = 0; c < atom.schema.size(); ++c)
            t.push_back(Value{Bitstring{c == 0 ? "0" : "01"}});
        rel.rows.push_back(std::move(t));
        mixed.relations[atom.label] = std::move(rel);
    }
    CHECK_THROWS_AS((void)backward_transform(ej, mixed, target), MixedBitstringLengths);

    Query self_join = parse_query("R([A],[B]), S([A],[C]), T([C],[D]), T([C],[E])");
    BackwardTargetKey self_target = backward_key_for(self_join);
    CHECK_THROWS_AS((void)backward_transform(ej, mixed, self_target), SelfJoinUnsupported);
}

TEST_CASE("cycle embedding preserves the cycle answer") {
    Query target = parse_query(kTriangle);
    std::mt19937_64 rng(95);
    std::uniform_int_distribution<int> value(0, 2);
    std::uniform_int_distribution<std::size_t> rows(1, 3);
    std::vector<Variable> pair_schema{{"u", VarKind::Point}, {"v", VarKind::Point}};
    for (int trial = 0; trial < 100; ++trial) {
        CAPTURE(trial);
        Database cycle_db;
        for (int i = 0; i < 3; ++i) {
            std::string label = "E" + std::to_string(i);
            Relation rel{label, pair_schema, {}};
            std::size_t n = rows(rng);
            for (std::size_t r = 0; r < n; ++r)
                rel.rows.push_back({Value{Rational(value(rng))}, Value{Rational(value(rng))}});
            cycle_db.relations[label] = std::move(rel);
        }

        bool expect = false;
        for (const Tuple& a : cycle_db.at("E0").rows) {
            for (const Tuple& b : cycle_db.at("E1").rows) {
                for (const Tuple& c : cycle_db.at("E2").rows) {
                    if (a[1] == b[0] && b[1] == c[0] && c[1] == a[0]) expect = true;
                }
            }
        }

        auto [query, db] = embed_cycle_query(target, 3, cycle_db);
        CHECK(query == target);
        CHECK(oracle_eval(query, db) == expect);
    }
}

TEST_CASE("cycle embedding rejects unusable inputs") {
    Query target = parse_query(kTriangle);
    Database three;
    std::vector<Variable> pair_schema{{"u", VarKind::Point}, {"v", VarKind::Point}};
    for (int i = 0; i < 3; ++i) {
        std::string label = "E" + std::to_string(i);
        three.relations[label] = Relation{label, pair_schema, {{Value{Rational(0)}, Value{Rational(0)}}}};
    }
    CHECK_THROWS_AS((void)embed_cycle_query(target, 2, three), Error);
    CHECK_THROWS_AS((void)embed_cycle_query(target, 4, three), Error);
    CHECK_THROWS_AS((void)embed_cycle_query(parse_query("R([A],[B]), S([B],[C])"), 3, three),
                    NoBergeCycle);

    Database wide = three;
    wide.relations["E1"].schema.push_back({"w", VarKind::Point});
    wide.relations["E1"].rows[0].push_back(Value{Rational(0)});
    CHECK_THROWS_AS((void)embed_cycle_query(target, 3, wide), ArityMismatch);

    Database interval_cells = three;
    interval_cells.relations["E2"].rows[0][0] = Value{iv(0, 1)};
    CHECK_THROWS_AS((void)embed_cycle_query(target, 3, interval_cells), KindMismatch);
}

}
