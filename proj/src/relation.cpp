#include "ijq/relation.hpp"

#include "ijq/errors.hpp"

namespace ijq {

std::size_t Relation::column(const std::string& name) const {
    for (std::size_t i = 0; i < schema.size(); ++i) {
        if (schema[i].name == name) return i;
    }
    throw Error("relation " + label + " has no column " + name);
}

const Relation& Database::at(const std::string& label) const {
    auto it = relations.find(label);
    if (it == relations.end()) throw MissingRelation("no relation for atom label " + label);
    return it->second;
}

std::size_t Database::total_rows() const {
    std::size_t n = 0;
    for (const auto& [label, rel] : relations) n += rel.rows.size();
    return n;
}

void validate(const Database& db, const Query& q) {
    check_well_formed(q);
    for (const Atom& atom : q.atoms) {
        auto it = db.relations.find(atom.label);
        if (it == db.relations.end())
            throw MissingRelation("no relation for atom label " + atom.label);
        const Relation& rel = it->second;
        if (rel.schema.size() != atom.schema.size())
            throw ArityMismatch("relation " + atom.label + " has arity " +
                                std::to_string(rel.schema.size()) + ", atom needs " +
                                std::to_string(atom.schema.size()));
        for (std::size_t c = 0; c < atom.schema.size(); ++c) {
            if (rel.schema[c].name != atom.schema[c].name ||
                rel.schema[c].kind != atom.schema[c].kind)
                throw KindMismatch("relation " + atom.label + " column " +
                                   std::to_string(c) + " is " + rel.schema[c].name +
                                   ", atom needs " + atom.schema[c].name);
        }
        for (std::size_t r = 0; r < rel.rows.size(); ++r) {
            const Tuple& row = rel.rows[r];
            if (row.size() != rel.schema.size())
                throw ArityMismatch("relation " + atom.label + " row " + std::to_string(r) +
                                    " has " + std::to_string(row.size()) + " cells");
            for (std::size_t c = 0; c < row.size(); ++c) {
                bool is_interval_cell = std::holds_alternative<Interval>(row[c]);
                bool wants_interval = rel.schema[c].kind == VarKind::Interval;
                if (is_interval_cell != wants_interval)
                    throw KindMismatch("relation " + atom.label + " column " +
                                       rel.schema[c].name + " row " + std::to_string(r) +
                                       ": cell kind does not match variable kind");
            }
        }
        // Point columns must not mix numbers and bitstrings: equality across
        // the two alternatives is always false, which hides data errors.
        for (std::size_t c = 0; c < rel.schema.size(); ++c) {
            if (rel.schema[c].kind != VarKind::Point) continue;
            bool saw_number = false;
            bool saw_bits = false;
            for (const Tuple& row : rel.rows) {
                saw_number |= std::holds_alternative<Rational>(row[c]);
                saw_bits |= std::holds_alternative<Bitstring>(row[c]);
            }
            if (saw_number && saw_bits)
                throw KindMismatch("relation " + atom.label + " column " + rel.schema[c].name +
                                   " mixes numbers and bitstrings");
        }
    }
}

std::string format_value(const Value& v) {
    if (const auto* q = std::get_if<Rational>(&v)) return format_rational(*q);
    if (const auto* x = std::get_if<Interval>(&v)) return format_interval(*x);
    return "\"" + std::get<Bitstring>(v).bits + "\"";
}

}  // namespace ijq
