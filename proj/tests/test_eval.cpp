#include "doctest.h"

#include "ijq/errors.hpp"
#include "ijq/eval.hpp"
#include "ijq/parser.hpp"
#include "ijq/reduction.hpp"

#include <algorithm>
#include <map>
#include <random>
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

/** Triangle instance whose first rows join and whose second rows never do. */
Database triangle_db() {
    Query q = parse_query("R([A],[B]), S([B],[C]), T([A],[C])");
    Database db = empty_db(q);
    db.relations["R"].rows = {{Value{iv(0, 2)}, Value{iv(0, 2)}}, {Value{iv(10, 11)}, Value{iv(10, 11)}}};
    db.relations["S"].rows = {{Value{iv(1, 3)}, Value{iv(1, 3)}}};
    db.relations["T"].rows = {{Value{iv(0, 5)}, Value{iv(0, 5)}}};
    return db;
}

const char* kTriangle = "R([A],[B]), S([B],[C]), T([A],[C])";
const char* kStaggered = "R([A],[B],[C]), S([B],[C]), T([A],[B])";
const char* kMixed = "R([X],P,[Y]), S([X],P), T([Y])";

}  // namespace

TEST_SUITE("eval") {

TEST_CASE("exhaustive check follows the per-variable semantics") {
    Query q = parse_query(kTriangle);
    CHECK(oracle_eval(q, triangle_db()));

    Database miss = triangle_db();
    miss.relations["S"].rows = {{Value{iv(1, 3)}, Value{iv(6, 7)}}};
    CHECK_FALSE(oracle_eval(q, miss));

    CHECK_FALSE(oracle_eval(q, empty_db(q)));

    Query points = parse_query("R(A,B), S(B,C)");
    Database db = empty_db(points);
    db.relations["R"].rows = {{Value{Rational(1)}, Value{Rational(2)}}};
    db.relations["S"].rows = {{Value{Rational(2)}, Value{Rational(3)}}};
    CHECK(oracle_eval(points, db));
    db.relations["S"].rows = {{Value{Rational(3)}, Value{Rational(3)}}};
    CHECK_FALSE(oracle_eval(points, db));

    // An interval variable in a single atom never constrains anything.
    Query pendant = parse_query("R([A],[B]), S([B])");
    Database pdb = empty_db(pendant);
    pdb.relations["R"].rows = {{Value{iv(5, 5)}, Value{iv(1, 2)}}};
    pdb.relations["S"].rows = {{Value{iv(2, 3)}}};
    CHECK(oracle_eval(pendant, pdb));
}

TEST_CASE("exhaustive check refuses oversized products") {
    Query q = parse_query(kTriangle);
    Database db = triangle_db();
    CHECK_THROWS_AS((void)oracle_eval(q, db, 1), TooLargeForOracle);
    CHECK(oracle_eval(q, db, 10));

    // Emptiness wins over the size cap when it is seen first.
    Database drained = triangle_db();
    drained.relations["R"].rows.clear();
    CHECK_FALSE(oracle_eval(q, drained, 1));
}

TEST_CASE("witness rows are validated one by one") {
    Query q = parse_query(kTriangle);
    Database db = triangle_db();
    CHECK(check_witness(q, db, {{"R", 0}, {"S", 0}, {"T", 0}}));
    CHECK_FALSE(check_witness(q, db, {{"R", 1}, {"S", 0}, {"T", 0}}));
    CHECK_THROWS_AS((void)check_witness(q, db, {{"R", 0}, {"S", 0}}), Error);
    CHECK_THROWS_AS((void)check_witness(q, db, {{"R", 0}, {"S", 5}, {"T", 0}}), Error);
}

TEST_CASE("join tree evaluation handles acyclic equality joins") {
    Query q = parse_query("R(A,B), S(B,C)");
    Database db = empty_db(q);
    db.relations["R"].rows = {{Value{Rational(1)}, Value{Rational(2)}}};
    db.relations["S"].rows = {{Value{Rational(2)}, Value{Rational(3)}}};
    CHECK(yannakakis_bool(q, db));
    db.relations["S"].rows = {{Value{Rational(4)}, Value{Rational(3)}}};
    CHECK_FALSE(yannakakis_bool(q, db));
    db.relations["S"].rows.clear();
    CHECK_FALSE(yannakakis_bool(q, db));
}

TEST_CASE("join tree evaluation rejects what it cannot solve") {
    Query cyclic = parse_query("R(A,B), S(B,C), T(A,C)");
    CHECK_THROWS_AS((void)yannakakis_bool(cyclic, empty_db(cyclic)), NotAcyclic);

    Query shared = parse_query("R([X]), S([X])");
    CHECK_THROWS_AS((void)yannakakis_bool(shared, empty_db(shared)), KindMismatch);
    CHECK_THROWS_AS((void)wcoj_bool(shared, empty_db(shared)), KindMismatch);
    CHECK_THROWS_AS((void)decomp_eval(shared, empty_db(shared), {{{"X"}}, {}}), KindMismatch);
}

TEST_CASE("join tree evaluation carries unshared interval columns") {
    Query q = parse_query("R(A,[I]), S(A,B), T(B,[J])");
    Database db = empty_db(q);
    db.relations["R"].rows = {{Value{Rational(1)}, Value{iv(0, 9)}}};
    db.relations["S"].rows = {{Value{Rational(1)}, Value{Rational(7)}}};
    db.relations["T"].rows = {{Value{Rational(7)}, Value{iv(3, 3)}}};
    CHECK(yannakakis_bool(q, db));
    CHECK(wcoj_bool(q, db));
    db.relations["S"].rows[0][1] = Value{Rational(8)};
    CHECK_FALSE(yannakakis_bool(q, db));
    CHECK_FALSE(wcoj_bool(q, db));
}

TEST_CASE("join tree evaluation agrees with the exhaustive check") {
    std::mt19937_64 rng(90125);
    for (const char* text : {"R(A,B), S(B,C), T(C,D)", "R(A,B), S(A,C), T(A,D)",
                             "R(A,[I]), S(A,B), T(B,[J])"}) {
        Query q = parse_query(text);
        for (int trial = 0; trial < 60; ++trial) {
            Database db = random_db(rng, q, 4, 0, 2);
            CHECK(yannakakis_bool(q, db) == oracle_eval(q, db));
        }
    }
}

TEST_CASE("generic join agrees with the exhaustive check") {
    std::mt19937_64 rng(61772);
    Query q = parse_query("R(A,B), S(B,C), T(A,C)");
    for (int trial = 0; trial < 150; ++trial) {
        Database db = random_db(rng, q, 4, 0, 2);
        CHECK(wcoj_bool(q, db) == oracle_eval(q, db));
    }

    // Unconstrained atoms still participate through emptiness.
    Query loose = parse_query("R([I]), S(A)");
    Database db = empty_db(loose);
    db.relations["S"].rows = {{Value{Rational(1)}}};
    CHECK_FALSE(wcoj_bool(loose, db));
    db.relations["R"].rows = {{Value{iv(0, 1)}}};
    CHECK(wcoj_bool(loose, db));
}

TEST_CASE("decomposition evaluation agrees with the exhaustive check") {
    std::mt19937_64 rng(73553);
    Query q = parse_query("R(A,B), S(B,C), T(C,D), U(A,D)");
    TreeDecomposition td{{{"A", "B", "C"}, {"A", "C", "D"}}, {{0, 1}}};
    for (int trial = 0; trial < 100; ++trial) {
        Database db = random_db(rng, q, 4, 0, 2);
        CHECK(decomp_eval(q, db, td) == oracle_eval(q, db));
    }
    CHECK_FALSE(decomp_eval(q, empty_db(q), td));
}

TEST_CASE("decomposition evaluation rejects a foreign decomposition") {
    Query q = parse_query("R(A,B), S(B,C), T(A,C)");
    CHECK_THROWS_AS((void)decomp_eval(q, empty_db(q), {{{"A", "B"}}, {}}), InvalidDecomposition);
    CHECK_THROWS_AS((void)decomp_eval(q, empty_db(q), {{{"A", "B", "C", "Z"}}, {}}),
                    InvalidDecomposition);
    CHECK_FALSE(decomp_eval(q, empty_db(q), {{{"A", "B", "C"}}, {}}));
}

TEST_CASE("full pipeline reports a validated witness") {
    Query q = parse_query(kTriangle);
    EvalReport report = eval_ij(q, triangle_db());
    CHECK(report.result);
    CHECK(report.witness_checked);
    CHECK(check_witness(q, triangle_db(), report.witness));
    CHECK(report.witness.size() == 3);
    CHECK(report.witness.at("S") == 0);
    CHECK(report.witness.at("T") == 0);
    REQUIRE(!report.engines.empty());
    // Resolved triangle sub-queries keep a cyclic core, so no join tree fits.
    CHECK(report.engines.front().second == "decomposition");
    CHECK(report.early_exit);  // the first sub-query already succeeds

    REQUIRE(report.timings.size() == 3);
    CHECK(report.timings[0].first == "reduce");
    CHECK(report.timings[1].first == "analyze");
    CHECK(report.timings[2].first == "evaluate");
}

TEST_CASE("full pipeline covers every sub-query on a miss") {
    Query q = parse_query(kTriangle);
    Database db = empty_db(q);
    EvalReport report = eval_ij(q, db);
    CHECK_FALSE(report.result);
    CHECK_FALSE(report.early_exit);
    CHECK_FALSE(report.witness_checked);
    CHECK(report.witness.empty());
    CHECK(report.engines.size() == 8);
    for (const auto& [name, engine] : report.engines) CHECK(engine == "empty-relation");
    CHECK(report.relation_sizes.size() == 12);
    for (const auto& [label, size] : report.relation_sizes) CHECK(size == 0);
}

TEST_CASE("oracle strategy runs the definition directly") {
    Query q = parse_query(kTriangle);
    EvalOptions options;
    options.strategy = Strategy::OracleOnly;
    EvalReport report = eval_ij(q, triangle_db(), options);
    CHECK(report.result);
    CHECK(report.witness_checked);
    REQUIRE(report.engines.size() == 1);
    CHECK(report.engines[0] == std::pair<std::string, std::string>{"R S T", "oracle"});

    options.max_oracle_cells = 1;
    CHECK_THROWS_AS((void)eval_ij(q, triangle_db(), options), TooLargeForOracle);
}

TEST_CASE("forced join trees refuse cyclic sub-queries") {
    EvalOptions options;
    options.strategy = Strategy::ReduceYannakakis;

    // No two atoms share more than one junction, so every sub-query is acyclic.
    Query fine = parse_query(kMixed);
    Database db = empty_db(fine);
    db.relations["R"].rows = {{Value{iv(0, 1)}, Value{Rational(5)}, Value{iv(2, 3)}}};
    db.relations["S"].rows = {{Value{iv(1, 2)}, Value{Rational(5)}}};
    db.relations["T"].rows = {{Value{iv(3, 4)}}};
    CHECK(eval_ij(fine, db, options).result);

    // The triangle and the staggered shape both keep a cyclic sub-query.
    Query triangle = parse_query(kTriangle);
    CHECK_THROWS_AS((void)eval_ij(triangle, triangle_db(), options), NotAcyclic);
    Query hard = parse_query(kStaggered);
    CHECK_THROWS_AS((void)eval_ij(hard, empty_db(hard), options), NotAcyclic);
}

TEST_CASE("strategies agree with each other and the definition") {
    std::mt19937_64 rng(88200);
    for (const char* text : {kTriangle, kStaggered, kMixed}) {
        Query q = parse_query(text);
        for (int trial = 0; trial < 50; ++trial) {
            Database db = random_db(rng, q, 3, 0, 3);
            bool expected = oracle_eval(q, db);

            EvalOptions via_decomp;
            via_decomp.strategy = Strategy::ReduceDecomp;
            EvalOptions capped;
            capped.vertex_cap = 0;

            EvalReport automatic = eval_ij(q, db);
            CHECK(automatic.result == expected);
            CHECK(eval_ij(q, db, via_decomp).result == expected);
            CHECK(eval_ij(q, db, capped).result == expected);
            if (automatic.result) {
                CHECK(automatic.witness_checked);
                CHECK(check_witness(q, db, automatic.witness));
            }
        }
    }
}

TEST_CASE("capped planning falls back to the generic join") {
    Query q = parse_query(kStaggered);
    Database db = empty_db(q);
    db.relations["R"].rows = {{Value{iv(0, 1)}, Value{iv(0, 1)}, Value{iv(0, 1)}}};
    db.relations["S"].rows = {{Value{iv(0, 1)}, Value{iv(0, 1)}}};
    db.relations["T"].rows = {{Value{iv(5, 6)}, Value{iv(5, 6)}}};

    EvalOptions capped;
    capped.vertex_cap = 0;
    EvalReport report = eval_ij(q, db, capped);
    CHECK_FALSE(report.result);
    CHECK(report.engines.size() == 24);
    bool saw_generic = false;
    bool saw_tree = false;
    for (const auto& [name, engine] : report.engines) {
        if (engine == "generic-join") saw_generic = true;
        if (engine == "join-tree") saw_tree = true;
        CHECK(engine != "decomposition");
    }
    CHECK(saw_generic);
    CHECK(saw_tree);

    EvalOptions roomy;
    roomy.strategy = Strategy::ReduceDecomp;
    EvalReport wide = eval_ij(q, db, roomy);
    CHECK_FALSE(wide.result);
    for (const auto& [name, engine] : wide.engines) CHECK(engine == "decomposition");
}

TEST_CASE("parallel evaluation never changes the outcome") {
    std::mt19937_64 rng(30301);
    for (const char* text : {kTriangle, kStaggered}) {
        Query q = parse_query(text);
        for (int trial = 0; trial < 25; ++trial) {
            Database db = random_db(rng, q, 3, 0, 2);
            EvalOptions parallel;
            parallel.parallel = true;
            EvalReport seq = eval_ij(q, db);
            EvalReport par = eval_ij(q, db, parallel);
            CHECK(seq.result == par.result);
            if (par.result) {
                CHECK(par.witness_checked);
                CHECK(check_witness(q, db, par.witness));
            }
        }
    }
}

TEST_CASE("equality-only inputs pass through the pipeline untouched") {
    Query q = parse_query("R(A,B), S(B,C)");
    Database db = empty_db(q);
    db.relations["R"].rows = {{Value{Rational(1)}, Value{Rational(2)}}};
    db.relations["S"].rows = {{Value{Rational(2)}, Value{Rational(3)}}};
    EvalReport report = eval_ij(q, db);
    CHECK(report.result);
    CHECK(report.engines.size() == 1);
    CHECK_FALSE(report.early_exit);
    CHECK(report.relation_sizes ==
          std::map<std::string, std::size_t>{{"R", 1}, {"S", 1}});
    CHECK(report.witness == std::map<std::string, std::size_t>{{"R", 0}, {"S", 0}});
}

TEST_CASE("pipeline validates the database against the query") {
    Query q = parse_query(kTriangle);
    Database db = triangle_db();
    db.relations.erase("T");
    CHECK_THROWS_AS((void)eval_ij(q, db), MissingRelation);
}

}  // TEST_SUITE
