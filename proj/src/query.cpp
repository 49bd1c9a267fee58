#include "ijq/query.hpp"

#include "ijq/hypergraph.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace ijq {

std::vector<std::string> Query::variable_names() const {
    std::vector<std::string> names;
    std::set<std::string> seen;
    for (const Atom& a : atoms) {
        for (const Variable& v : a.schema) {
            if (seen.insert(v.name).second) names.push_back(v.name);
        }
    }
    return names;
}

VarKind Query::kind_of(const std::string& name) const {
    for (const Atom& a : atoms) {
        for (const Variable& v : a.schema) {
            if (v.name == name) return v.kind;
        }
    }
    throw Error("unknown variable: " + name);
}

std::vector<std::size_t> Query::atoms_with(const std::string& name) const {
    std::vector<std::size_t> result;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        const auto& schema = atoms[i].schema;
        if (std::any_of(schema.begin(), schema.end(),
                        [&](const Variable& v) { return v.name == name; }))
            result.push_back(i);
    }
    return result;
}

QueryClass Query::classify() const {
    bool has_point = false;
    bool has_interval = false;
    for (const Atom& a : atoms) {
        for (const Variable& v : a.schema) {
            (v.kind == VarKind::Point ? has_point : has_interval) = true;
        }
    }
    if (has_point && has_interval) return QueryClass::Mixed;
    return has_interval ? QueryClass::IntersectionJoin : QueryClass::EqualityJoin;
}

void check_well_formed(const Query& q) {
    if (q.atoms.empty()) throw Error("query has no atoms");
    std::set<std::string> labels;
    std::map<std::string, VarKind> kinds;
    for (const Atom& a : q.atoms) {
        if (a.schema.empty()) throw Error("atom " + a.label + " has an empty schema");
        if (!labels.insert(a.label).second)
            throw Error("duplicate atom label: " + a.label);
        std::set<std::string> in_atom;
        for (const Variable& v : a.schema) {
            if (!in_atom.insert(v.name).second)
                throw DuplicateVariableInAtom("variable " + v.name + " repeated in atom " + a.label);
            auto [it, inserted] = kinds.emplace(v.name, v.kind);
            if (!inserted && it->second != v.kind)
                throw Error("variable " + v.name + " used with both kinds");
        }
    }
}

Hypergraph hypergraph_of(const Query& q) {
    std::vector<Hyperedge> edges;
    edges.reserve(q.atoms.size());
    for (const Atom& a : q.atoms) {
        Hyperedge e;
        e.label = a.label;
        for (const Variable& v : a.schema) e.vertices.push_back(v.name);
        std::sort(e.vertices.begin(), e.vertices.end());
        e.vertices.erase(std::unique(e.vertices.begin(), e.vertices.end()), e.vertices.end());
        edges.push_back(std::move(e));
    }
    return make_hypergraph(std::move(edges));
}

Hypergraph make_hypergraph(std::vector<Hyperedge> edges) {
    Hypergraph h;
    std::set<std::string> verts;
    for (Hyperedge& e : edges) {
        std::sort(e.vertices.begin(), e.vertices.end());
        e.vertices.erase(std::unique(e.vertices.begin(), e.vertices.end()), e.vertices.end());
        verts.insert(e.vertices.begin(), e.vertices.end());
    }
    h.vertices.assign(verts.begin(), verts.end());
    h.edges = std::move(edges);
    return h;
}

bool Hypergraph::has_vertex(const std::string& v) const {
    return std::binary_search(vertices.begin(), vertices.end(), v);
}

std::size_t Hypergraph::degree(const std::string& v) const {
    std::size_t n = 0;
    for (const Hyperedge& e : edges) {
        if (std::binary_search(e.vertices.begin(), e.vertices.end(), v)) ++n;
    }
    return n;
}

std::vector<std::string> Hypergraph::edges_with(const std::string& v) const {
    std::vector<std::string> labels;
    for (const Hyperedge& e : edges) {
        if (std::binary_search(e.vertices.begin(), e.vertices.end(), v)) labels.push_back(e.label);
    }
    return labels;
}

std::size_t Hypergraph::edge_index(const std::string& label) const {
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (edges[i].label == label) return i;
    }
    throw Error("no edge labeled " + label);
}

}  // namespace ijq
