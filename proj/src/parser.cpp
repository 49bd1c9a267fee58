#include "ijq/parser.hpp"

#include "ijq/errors.hpp"

#include <cctype>
#include <map>
#include <string>
#include <vector>

namespace ijq {

namespace {

struct Scanner {
    std::string_view text;
    std::size_t pos = 0;
    std::size_t line = 1;
    std::size_t column = 1;

    [[noreturn]] void fail(const std::string& what) const {
        throw SyntaxError(what + " at line " + std::to_string(line) + ", column " +
                          std::to_string(column));
    }

    bool eof() const { return pos == text.size(); }

    char peek() const { return text[pos]; }

    void advance() {
        if (text[pos] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
        ++pos;
    }

    void skip_whitespace() {
        while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) advance();
    }

    void expect(char c) {
        skip_whitespace();
        if (eof()) fail(std::string("expected '") + c + "', found end of input");
        if (peek() != c) fail(std::string("expected '") + c + "', found '" + peek() + "'");
        advance();
    }

    bool try_consume(char c) {
        skip_whitespace();
        if (eof() || peek() != c) return false;
        advance();
        return true;
    }

    std::string name() {
        skip_whitespace();
        if (eof()) fail("expected a name, found end of input");
        char c = peek();
        if (!std::isalpha(static_cast<unsigned char>(c)))
            fail(std::string("expected a name, found '") + c + "'");
        std::string out;
        while (!eof()) {
            c = peek();
            if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') break;
            out += c;
            advance();
        }
        return out;
    }
};

Variable parse_variable(Scanner& s) {
    if (s.try_consume('[')) {
        Variable v{s.name(), VarKind::Interval};
        s.expect(']');
        return v;
    }
    return Variable{s.name(), VarKind::Point};
}

Atom parse_atom(Scanner& s) {
    Atom atom;
    atom.label = s.name();
    s.expect('(');
    atom.schema.push_back(parse_variable(s));
    while (s.try_consume(',')) atom.schema.push_back(parse_variable(s));
    s.expect(')');
    return atom;
}

}  // namespace

Query parse_query(std::string_view text) {
    Scanner s{text};
    Query q;
    q.atoms.push_back(parse_atom(s));
    while (s.try_consume(',')) q.atoms.push_back(parse_atom(s));
    s.skip_whitespace();
    if (!s.eof()) s.fail(std::string("unexpected '") + s.peek() + "'");

    std::map<std::string, std::size_t> uses;
    for (const Atom& atom : q.atoms) ++uses[atom.label];
    std::map<std::string, std::size_t> next;
    for (Atom& atom : q.atoms) {
        if (uses[atom.label] < 2) continue;
        std::size_t occurrence = ++next[atom.label];
        atom.label += "#" + std::to_string(occurrence);
    }

    check_well_formed(q);
    return q;
}

std::string format_query(const Query& q) {
    std::string out;
    for (const Atom& atom : q.atoms) {
        if (!out.empty()) out += ", ";
        out += atom.label;
        out += '(';
        for (std::size_t i = 0; i < atom.schema.size(); ++i) {
            if (i) out += ',';
            const Variable& v = atom.schema[i];
            if (v.kind == VarKind::Interval)
                out += "[" + v.name + "]";
            else
                out += v.name;
        }
        out += ')';
    }
    return out;
}

}  // namespace ijq
