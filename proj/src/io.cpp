#include "ijq/io.hpp"

#include "ijq/errors.hpp"
#include "ijq/interval.hpp"

#include "json.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace ijq {

namespace {

using ordered_json = nlohmann::ordered_json;

bool valid_name(const std::string& name) {
    if (name.empty() || !std::isalpha(static_cast<unsigned char>(name.front()))) return false;
    for (char c : name)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return true;
}

Variable parse_schema_token(const std::string& token, const std::string& where) {
    std::string name = token;
    VarKind kind = VarKind::Point;
    if (!token.empty() && token.front() == '[') {
        if (token.back() != ']') throw ParseError("malformed schema token " + token + " in " + where);
        name = token.substr(1, token.size() - 2);
        kind = VarKind::Interval;
    }
    if (!valid_name(name)) throw ParseError("malformed schema token " + token + " in " + where);
    return Variable{name, kind};
}

std::string schema_token(const Variable& v) {
    return v.kind == VarKind::Interval ? "[" + v.name + "]" : v.name;
}

/** Interval cell whose open endpoints still need the epsilon adjustment. */
struct OpenEndpoints {
    std::string label;
    std::size_t row = 0;
    std::size_t col = 0;
    bool l_open = false;
    bool r_open = false;
};

struct Loader {
    Database db;
    std::vector<OpenEndpoints> open;

    Value parse_interval_cell(const std::string& text, const std::string& where,
                              const std::string& label, std::size_t row, std::size_t col) {
        bool l_open = false;
        bool r_open = false;
        Interval x = [&] {
            try {
                return parse_interval_raw(text, l_open, r_open);
            } catch (const Error& e) {
                throw ParseError(std::string(e.what()) + " in " + where);
            }
        }();
        if (l_open || r_open) open.push_back({label, row, col, l_open, r_open});
        return x;
    }

    /**
     * Close the open endpoints collected across the whole database, moving
     * each inwards by a quarter of the smallest endpoint gap divided by the
     * interval count plus one. Small enough that no intersection relation
     * between the data's intervals changes.
     */
    void close_open_endpoints() {
        if (open.empty()) return;
        std::vector<Rational> points;
        std::size_t intervals = 0;
        for (const auto& [label, rel] : db.relations) {
            for (const Tuple& tuple : rel.rows) {
                for (const Value& cell : tuple) {
                    if (const Interval* x = std::get_if<Interval>(&cell)) {
                        points.push_back(x->l);
                        points.push_back(x->r);
                        ++intervals;
                    }
                }
            }
        }
        std::sort(points.begin(), points.end());
        points.erase(std::unique(points.begin(), points.end()), points.end());
        Rational gap = 1;
        for (std::size_t i = 1; i < points.size(); ++i) {
            Rational d = points[i] - points[i - 1];
            if (i == 1 || d < gap) gap = d;
        }
        Rational eps = gap / (4 * (Rational(intervals) + 1));
        for (const OpenEndpoints& o : open) {
            Value& cell = db.relations.at(o.label).rows[o.row][o.col];
            Interval x = std::get<Interval>(cell);
            if (o.l_open) x.l += eps;
            if (o.r_open) x.r -= eps;
            if (x.l > x.r)
                throw ParseError("open interval in " + o.label + " row " +
                                 std::to_string(o.row + 1) + " is empty");
            cell = x;
        }
    }
};

std::vector<std::string> split_plain(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

/** Split a data row on commas, keeping the single interior comma of
 *  bracketed interval cells. */
std::vector<std::string> split_cells(const std::string& line, const std::string& where) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (true) {
        std::string cell;
        if (i < line.size() && (line[i] == '[' || line[i] == '(')) {
            std::size_t close = line.find_first_of("])", i);
            if (close == std::string::npos)
                throw ParseError("unterminated interval cell in " + where);
            cell = line.substr(i, close - i + 1);
            i = close + 1;
        } else {
            std::size_t comma = line.find(',', i);
            if (comma == std::string::npos) comma = line.size();
            cell = line.substr(i, comma - i);
            i = comma;
        }
        out.push_back(std::move(cell));
        if (i == line.size()) return out;
        if (line[i] != ',') throw ParseError("expected a comma after an interval cell in " + where);
        ++i;
        if (i == line.size()) {
            out.emplace_back();
            return out;
        }
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << content;
    if (!out) throw IoError("cannot write " + path.string());
}

void load_csv(Loader& loader, const std::filesystem::path& path) {
    const std::string label = path.stem().string();
    const std::string content = read_file(path);
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start <= content.size()) {
        std::size_t nl = content.find('\n', start);
        if (nl == std::string::npos) {
            lines.push_back(content.substr(start));
            break;
        }
        lines.push_back(content.substr(start, nl - start));
        start = nl + 1;
    }
    if (!lines.empty() && lines.back().empty()) lines.pop_back();
    if (lines.empty()) throw ParseError("missing header row in " + path.string());

    Relation rel;
    rel.label = label;
    for (const std::string& token : split_plain(lines.front()))
        rel.schema.push_back(parse_schema_token(token, path.string()));

    for (std::size_t n = 1; n < lines.size(); ++n) {
        const std::string where = path.string() + " line " + std::to_string(n + 1);
        std::vector<std::string> cells = split_cells(lines[n], where);
        if (cells.size() != rel.schema.size())
            throw ParseError("expected " + std::to_string(rel.schema.size()) + " cells, found " +
                             std::to_string(cells.size()) + " in " + where);
        Tuple tuple;
        tuple.reserve(cells.size());
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (rel.schema[c].kind == VarKind::Interval) {
                tuple.push_back(
                    loader.parse_interval_cell(cells[c], where, label, rel.rows.size(), c));
            } else {
                try {
                    tuple.push_back(parse_rational(cells[c]));
                } catch (const Error& e) {
                    throw ParseError(std::string(e.what()) + " in " + where);
                }
            }
        }
        rel.rows.push_back(std::move(tuple));
    }
    loader.db.relations.emplace(label, std::move(rel));
}

bool bitstring_text(const std::string& text) {
    return std::all_of(text.begin(), text.end(), [](char c) { return c == '0' || c == '1'; });
}

void load_json(Loader& loader, const std::filesystem::path& path) {
    ordered_json j = [&] {
        try {
            return ordered_json::parse(read_file(path));
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string(e.what()) + " in " + path.string());
        }
    }();
    if (!j.is_object() || !j.contains("relations") || !j["relations"].is_object())
        throw ParseError("expected a top-level \"relations\" object in " + path.string());

    for (const auto& [label, entry] : j["relations"].items()) {
        const std::string where = path.string() + " relation " + label;
        if (!entry.is_object() || !entry.contains("schema") || !entry.contains("rows"))
            throw ParseError("expected \"schema\" and \"rows\" in " + where);
        Relation rel;
        rel.label = label;
        for (const auto& token : entry["schema"]) {
            if (!token.is_string()) throw ParseError("non-string schema token in " + where);
            rel.schema.push_back(parse_schema_token(token.get<std::string>(), where));
        }
        for (const auto& row : entry["rows"]) {
            if (!row.is_array() || row.size() != rel.schema.size())
                throw ParseError("row arity mismatch in " + where);
            Tuple tuple;
            tuple.reserve(rel.schema.size());
            for (std::size_t c = 0; c < rel.schema.size(); ++c) {
                const auto& cell = row[c];
                if (rel.schema[c].kind == VarKind::Interval) {
                    if (!cell.is_string())
                        throw ParseError("interval cell must be a string in " + where);
                    tuple.push_back(loader.parse_interval_cell(cell.get<std::string>(), where,
                                                               label, rel.rows.size(), c));
                } else if (cell.is_number_integer() || cell.is_number_unsigned()) {
                    tuple.push_back(Rational(Int(cell.dump())));
                } else if (cell.is_string()) {
                    const std::string text = cell.get<std::string>();
                    if (bitstring_text(text)) {
                        tuple.push_back(Bitstring{text});
                    } else {
                        try {
                            tuple.push_back(parse_rational(text));
                        } catch (const Error& e) {
                            throw ParseError(std::string(e.what()) + " in " + where);
                        }
                    }
                } else {
                    throw ParseError("unsupported cell " + cell.dump() + " in " + where);
                }
            }
            rel.rows.push_back(std::move(tuple));
        }
        loader.db.relations.emplace(label, std::move(rel));
    }
}

std::string csv_cell(const Value& v, const std::string& label) {
    if (const Rational* r = std::get_if<Rational>(&v)) return format_rational(*r);
    if (const Interval* x = std::get_if<Interval>(&v)) return format_interval(*x);
    throw IoError("bitstring cells in " + label + " need the json form");
}

ordered_json json_cell(const Value& v) {
    if (const Rational* r = std::get_if<Rational>(&v)) {
        if (boost::multiprecision::denominator(*r) == 1) {
            const Int& n = boost::multiprecision::numerator(*r);
            if (n >= Int(std::numeric_limits<std::int64_t>::min()) &&
                n <= Int(std::numeric_limits<std::int64_t>::max()))
                return ordered_json(n.convert_to<std::int64_t>());
            return ordered_json(n.str() + "/1");
        }
        return ordered_json(format_rational(*r));
    }
    if (const Interval* x = std::get_if<Interval>(&v)) return ordered_json(format_interval(*x));
    return ordered_json(std::get<Bitstring>(v).bits);
}

}  // namespace

Database load_database(const std::filesystem::path& path) {
    Loader loader;
    if (std::filesystem::is_directory(path)) {
        std::vector<std::filesystem::path> files;
        for (const auto& entry : std::filesystem::directory_iterator(path))
            if (entry.is_regular_file() && entry.path().extension() == ".csv")
                files.push_back(entry.path());
        if (files.empty()) throw IoError("no .csv files in " + path.string());
        std::sort(files.begin(), files.end());
        for (const auto& file : files) load_csv(loader, file);
    } else if (std::filesystem::is_regular_file(path)) {
        load_json(loader, path);
    } else {
        throw IoError("no database at " + path.string());
    }
    loader.close_open_endpoints();
    return std::move(loader.db);
}

void save_database(const Database& db, const std::filesystem::path& path) {
    if (path.extension() == ".json") {
        ordered_json relations = ordered_json::object();
        for (const auto& [label, rel] : db.relations) {
            ordered_json schema = ordered_json::array();
            for (const Variable& v : rel.schema) schema.push_back(schema_token(v));
            ordered_json rows = ordered_json::array();
            for (const Tuple& tuple : rel.rows) {
                ordered_json row = ordered_json::array();
                for (const Value& cell : tuple) row.push_back(json_cell(cell));
                rows.push_back(std::move(row));
            }
            relations[label] = {{"schema", std::move(schema)}, {"rows", std::move(rows)}};
        }
        ordered_json j = {{"relations", std::move(relations)}};
        write_file(path, j.dump(2) + "\n");
        return;
    }

    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec) throw IoError("cannot create directory " + path.string());
    for (const auto& [label, rel] : db.relations) {
        std::string content;
        for (std::size_t c = 0; c < rel.schema.size(); ++c) {
            if (c) content += ',';
            content += schema_token(rel.schema[c]);
        }
        content += '\n';
        for (const Tuple& tuple : rel.rows) {
            for (std::size_t c = 0; c < tuple.size(); ++c) {
                if (c) content += ',';
                content += csv_cell(tuple[c], label);
            }
            content += '\n';
        }
        write_file(path / (label + ".csv"), content);
    }
}

std::string digest(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char out[17];
    std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
    return out;
}

std::string digest_path(const std::filesystem::path& path) {
    if (std::filesystem::is_directory(path)) {
        std::vector<std::filesystem::path> files;
        for (const auto& entry : std::filesystem::directory_iterator(path))
            if (entry.is_regular_file() && entry.path().extension() == ".csv")
                files.push_back(entry.path());
        std::sort(files.begin(), files.end());
        std::string all;
        for (const auto& file : files) {
            all += file.filename().string();
            all += '\0';
            all += read_file(file);
            all += '\0';
        }
        return digest(all);
    }
    return digest(read_file(path));
}

}  // namespace ijq
