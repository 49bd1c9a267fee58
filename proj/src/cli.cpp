#include "ijq/cli.hpp"

#include "ijq/acyclicity.hpp"
#include "ijq/errors.hpp"
#include "ijq/eval.hpp"
#include "ijq/generator.hpp"
#include "ijq/io.hpp"
#include "ijq/parser.hpp"
#include "ijq/reduction.hpp"
#include "ijq/widths.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace ijq {

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr std::size_t kMaxEnumeratedMembers = 100000;

using ordered_json = nlohmann::ordered_json;

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void emit(const std::string& content, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + out_path);
    out << content;
}

struct QueryInput {
    std::string text;    // --query
    std::string file;    // --query-file

    void add_options(CLI::App* cmd) {
        cmd->add_option("-q,--query", text, "query text, e.g. \"R([A],[B]), S([B],[C])\"");
        cmd->add_option("--query-file", file, "file holding the query text");
    }

    std::string raw() const {
        if (!file.empty()) return read_text_file(file);
        if (!text.empty()) return text;
        throw Error("pass --query or --query-file");
    }
};

struct StrategyOption {
    std::string name = "auto";

    void add_option(CLI::App* cmd) {
        cmd->add_option("--strategy", name, "auto | oracle | yannakakis | decomp")
            ->capture_default_str();
    }

    Strategy value() const {
        if (name == "auto") return Strategy::Auto;
        if (name == "oracle") return Strategy::OracleOnly;
        if (name == "yannakakis") return Strategy::ReduceYannakakis;
        if (name == "decomp") return Strategy::ReduceDecomp;
        throw Error("unknown strategy '" + name + "'");
    }
};

/** R#1-style relabeling aside, interval variables shared by at least two
 *  atoms, in the resolution order the reduction uses. */
std::vector<std::string> shared_interval_variables(const Query& q) {
    std::vector<std::string> vars;
    for (const std::string& name : q.variable_names())
        if (q.kind_of(name) == VarKind::Interval && q.atoms_with(name).size() >= 2)
            vars.push_back(name);
    std::sort(vars.begin(), vars.end());
    return vars;
}

/** The rewritten queries, structure only, deduplicated in first-appearance
 *  order. Mirrors the data reduction's member enumeration. */
std::vector<Query> enumerate_members(const Query& q) {
    {
        CountPrediction counts = predict_counts(hypergraph_of(q));
        if (counts.queries > Int(kMaxEnumeratedMembers))
            throw SizeLimitExceeded("the rewriting has " + counts.queries.str() +
                                    " members, more than the enumeration cap");
    }
    std::vector<Query> members{q};
    for (const std::string& x : shared_interval_variables(q)) {
        std::vector<Query> next;
        for (const Query& member : members)
            for (Query& variant : onestep_query_all(member, x)) next.push_back(std::move(variant));
        members = std::move(next);
    }
    std::vector<Query> unique;
    std::set<std::string> seen;
    for (Query& member : members)
        if (seen.insert(format_query(member)).second) unique.push_back(std::move(member));
    return unique;
}

ordered_json timings_json(const std::vector<std::pair<std::string, double>>& timings) {
    ordered_json out = ordered_json::array();
    for (const auto& [phase, seconds] : timings)
        out.push_back({{"phase", phase}, {"seconds", seconds}});
    return out;
}

ordered_json eval_report_json(const EvalReport& report) {
    ordered_json engines = ordered_json::array();
    for (const auto& [query, engine] : report.engines)
        engines.push_back({{"query", query}, {"engine", engine}});
    ordered_json sizes = ordered_json::object();
    for (const auto& [label, rows] : report.relation_sizes) sizes[label] = rows;
    ordered_json witness;
    if (report.witness_checked) {
        witness = ordered_json::object();
        for (const auto& [label, row] : report.witness) witness[label] = row;
    }
    return {{"result", report.result},
            {"early_exit", report.early_exit},
            {"engines", std::move(engines)},
            {"relation_sizes", std::move(sizes)},
            {"witness", std::move(witness)},
            {"witness_checked", report.witness_checked}};
}

ordered_json analyze_payload(const Query& q) {
    Hypergraph h = hypergraph_of(q);
    ordered_json payload;
    payload["alpha"] = is_alpha_acyclic(h);
    payload["berge"] = is_berge_acyclic(h);
    payload["gamma"] = is_gamma_acyclic(h);
    payload["iota"] = is_iota_acyclic(h);
    if (std::optional<BergeCycle> cycle = find_berge_cycle(h, 2)) {
        payload["berge_cycle"] = {{"edges", cycle->edge_labels},
                                  {"vertices", cycle->vertices},
                                  {"length", cycle->length()}};
    } else {
        payload["berge_cycle"] = nullptr;
    }
    std::vector<Query> members = enumerate_members(q);
    payload["tau"] = members.size();
    payload["simplified"] = simplify(members).size();
    return payload;
}

ordered_json widths_payload(const Query& q) {
    Hypergraph h = hypergraph_of(q);
    std::vector<Hypergraph> members = tau(h);
    std::vector<Hypergraph> cores;
    cores.reserve(members.size());
    for (const Hypergraph& member : members) cores.push_back(drop_singleton_vertices(member));

    ordered_json classes = ordered_json::array();
    for (const std::vector<std::size_t>& group : isomorphism_classes(cores)) {
        const Hypergraph& core = cores[group.front()];
        std::vector<std::string> labels;
        for (const Hyperedge& e : members[group.front()].edges) labels.push_back(e.label);
        classes.push_back({{"representative", labels},
                           {"count", group.size()},
                           {"members", group},
                           {"fhtw", format_rational(fhtw(core).value)}});
    }
    return {{"members", members.size()},
            {"classes", std::move(classes)},
            {"ijw_fhtw_upper", format_rational(ijw_fhtw_upper(h))}};
}

struct GenOptions {
    GenSpec spec;
    std::uint64_t seed = 0;

    void add_options(CLI::App* cmd) {
        cmd->add_option("--rows", spec.rows, "tuples per relation")->capture_default_str();
        cmd->add_option("--grid-min", spec.grid_min, "left endpoint grid minimum")
            ->capture_default_str();
        cmd->add_option("--grid-max", spec.grid_max, "left endpoint grid maximum")
            ->capture_default_str();
        cmd->add_option("--grid-step", spec.grid_step, "left endpoint grid step")
            ->capture_default_str();
        cmd->add_option("--width-min", spec.width_min, "smallest interval width")
            ->capture_default_str();
        cmd->add_option("--width-max", spec.width_max, "largest interval width")
            ->capture_default_str();
        cmd->add_option("--point-min", spec.point_min, "smallest point value")
            ->capture_default_str();
        cmd->add_option("--point-max", spec.point_max, "largest point value")
            ->capture_default_str();
        cmd->add_option("--seed", seed, "generator seed")->capture_default_str();
    }
};

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"intersection-join query analysis and evaluation"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    QueryInput query_in;
    std::string db_path;
    std::string out_path;
    StrategyOption strategy;
    bool parallel = false;
    std::size_t max_oracle_cells = 10000000;
    std::size_t vertex_cap = 10;
    GenOptions gen;
    std::string sizes_text = "256,512,1024,2048";

    CLI::App* analyze = app.add_subcommand("analyze", "acyclicity classes and rewriting counts");
    query_in.add_options(analyze);
    analyze->add_option("--out", out_path, "write the JSON report here instead of stdout");

    CLI::App* reduce = app.add_subcommand("reduce", "rewrite to equality joins and save the result");
    query_in.add_options(reduce);
    reduce->add_option("--db", db_path, "database directory or .json file")->required();
    reduce->add_option("--out", out_path, "output directory for database.json and queries.txt")
        ->required();

    CLI::App* eval = app.add_subcommand("eval", "evaluate the query over a database");
    query_in.add_options(eval);
    eval->add_option("--db", db_path, "database directory or .json file")->required();
    eval->add_option("--out", out_path, "write the JSON report here instead of stdout");
    strategy.add_option(eval);
    eval->add_flag("--parallel", parallel, "evaluate rewritten members concurrently");
    eval->add_option("--max-oracle-cells", max_oracle_cells,
                     "row-count product cap for the oracle strategy")
        ->capture_default_str();
    eval->add_option("--vertex-cap", vertex_cap,
                     "largest shared-variable count evaluated by decomposition")
        ->capture_default_str();

    CLI::App* oracle = app.add_subcommand("oracle", "evaluate by exhaustive definition check");
    query_in.add_options(oracle);
    oracle->add_option("--db", db_path, "database directory or .json file")->required();
    oracle->add_option("--out", out_path, "write the JSON report here instead of stdout");
    oracle->add_option("--max-oracle-cells", max_oracle_cells,
                       "row-count product cap for the exhaustive check")
        ->capture_default_str();

    CLI::App* widths = app.add_subcommand("widths", "widths of the rewritten members");
    query_in.add_options(widths);
    widths->add_option("--out", out_path, "write the JSON report here instead of stdout");

    CLI::App* bench = app.add_subcommand("bench", "timing sweep over synthetic databases");
    query_in.add_options(bench);
    bench->add_option("--sizes", sizes_text, "comma-separated relation sizes")
        ->capture_default_str();
    strategy.add_option(bench);
    bench->add_flag("--parallel", parallel, "evaluate rewritten members concurrently");
    gen.add_options(bench);
    bench->add_option("--out", out_path, "write the CSV here instead of stdout");

    CLI::App* generate = app.add_subcommand("gen", "generate a synthetic database");
    query_in.add_options(generate);
    gen.add_options(generate);
    generate->add_option("--db-out", db_path, "database destination (directory or .json)")
        ->required();
    generate->add_option("--out", out_path, "write the JSON report here instead of stdout");

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("ijq");
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        auto started = std::chrono::steady_clock::now();
        auto total_seconds = [&] {
            return std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
                .count();
        };

        ordered_json report;
        CLI::App* active = app.get_subcommands().front();
        report["command"] = active->get_name();
        report["version"] = kVersion;

        std::string raw_query = query_in.raw();
        Query q = parse_query(raw_query);
        ordered_json inputs;
        inputs["query"] = raw_query;
        inputs["query_digest"] = digest(raw_query);
        if (active == reduce || active == eval || active == oracle) {
            inputs["database"] = db_path;
            inputs["database_digest"] = digest_path(db_path);
        }
        report["inputs"] = std::move(inputs);

        if (active == analyze) {
            report.update(analyze_payload(q));
        } else if (active == widths) {
            report.update(widths_payload(q));
        } else if (active == reduce) {
            Database db = load_database(db_path);
            ReductionOutput out = reduce_full(q, db);
            std::filesystem::path dir(out_path);
            std::error_code ec;
            std::filesystem::create_directories(dir, ec);
            if (ec) throw IoError("cannot create directory " + dir.string());
            save_database(out.database, dir / "database.json");
            std::string queries;
            for (const Query& member : out.queries) queries += format_query(member) + "\n";
            emit(queries, (dir / "queries.txt").string());
            ordered_json sizes = ordered_json::object();
            for (const auto& [label, rel] : out.database.relations) sizes[label] = rel.rows.size();
            report["members"] = out.queries.size();
            report["relation_sizes"] = std::move(sizes);
            report["files"] = {{"database", (dir / "database.json").string()},
                               {"queries", (dir / "queries.txt").string()}};
            out_path.clear();
        } else if (active == eval || active == oracle) {
            Database db = load_database(db_path);
            EvalOptions options;
            options.strategy = active == oracle ? Strategy::OracleOnly : strategy.value();
            options.parallel = parallel;
            options.max_oracle_cells = max_oracle_cells;
            options.vertex_cap = vertex_cap;
            EvalReport result = eval_ij(q, db, options);
            report.update(eval_report_json(result));
            std::vector<std::pair<std::string, double>> timings = result.timings;
            timings.emplace_back("total", total_seconds());
            report["timings"] = timings_json(timings);
        } else if (active == bench) {
            std::vector<std::size_t> sizes;
            std::stringstream parts(sizes_text);
            for (std::string part; std::getline(parts, part, ',');)
                sizes.push_back(static_cast<std::size_t>(std::stoull(part)));
            EvalOptions options;
            options.strategy = strategy.value();
            options.parallel = parallel;
            std::string csv = "n,phase,seconds\n";
            for (std::size_t n : sizes) {
                GenSpec spec = gen.spec;
                spec.rows = n;
                Database db = gen_synthetic(q, spec, gen.seed);
                EvalReport result = eval_ij(q, db, options);
                for (const auto& [phase, seconds] : result.timings)
                    csv += std::to_string(n) + "," + phase + "," + std::to_string(seconds) + "\n";
            }
            emit(csv, out_path);
            return 0;
        } else if (active == generate) {
            Database db = gen_synthetic(q, gen.spec, gen.seed);
            save_database(db, db_path);
            ordered_json sizes = ordered_json::object();
            for (const auto& [label, rel] : db.relations) sizes[label] = rel.rows.size();
            report["relation_sizes"] = std::move(sizes);
            report["database"] = db_path;
            report["database_digest"] = digest_path(db_path);
        }

        if (!report.contains("timings"))
            report["timings"] = timings_json({{"total", total_seconds()}});
        emit(report.dump(2) + "\n", out_path);
        return 0;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace ijq
