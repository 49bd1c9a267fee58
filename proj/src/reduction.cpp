#include "ijq/reduction.hpp"

#include "ijq/acyclicity.hpp"
#include "ijq/errors.hpp"
#include "ijq/segment_tree.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>

namespace ijq {

std::string ReducedRelationKey::render() const {
    if (positions.empty()) return base;
    std::string out = base + "_{";
    for (std::size_t i = 0; i < positions.size(); ++i) {
        if (i) out += ";";
        out += std::to_string(positions[i].second);
    }
    return out + "}";
}

ReducedRelationKey ReducedRelationKey::parse(const std::string& label) {
    ReducedRelationKey key;
    key.base = label;
    std::size_t open = label.rfind("_{");
    if (open == std::string::npos || label.empty() || label.back() != '}') return key;
    std::string inner = label.substr(open + 2, label.size() - open - 3);
    std::vector<std::pair<std::string, int>> positions;
    std::string part;
    for (char c : inner + ";") {
        if (c == ';') {
            if (part.empty() || !std::all_of(part.begin(), part.end(),
                                             [](unsigned char d) { return std::isdigit(d); }))
                return key;  // not a rendered key; the whole label is the base
            positions.emplace_back("", std::stoi(part));
            part.clear();
        } else {
            part += c;
        }
    }
    key.base = label.substr(0, open);
    key.positions = std::move(positions);
    return key;
}

std::vector<std::string> fresh_point_names(const std::string& x, std::size_t k,
                                           const std::vector<std::string>& taken) {
    std::set<std::string> used(taken.begin(), taken.end());
    std::string suffix;
    for (;;) {
        std::vector<std::string> names;
        for (std::size_t i = 1; i <= k; ++i) names.push_back(x + std::to_string(i) + suffix);
        if (std::none_of(names.begin(), names.end(),
                         [&](const std::string& n) { return used.count(n); }))
            return names;
        suffix += "_";
    }
}

namespace {

std::string extend_label(const std::string& label, const std::string& var, int position) {
    ReducedRelationKey key = ReducedRelationKey::parse(label);
    key.positions.emplace_back(var, position);
    return key.render();
}

void require_matching_sigma(std::vector<std::string> have, std::vector<std::string> sigma,
                            const std::string& x) {
    std::sort(have.begin(), have.end());
    std::vector<std::string> sorted = sigma;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != have)
        throw Error("permutation for " + x + " must cover exactly the atoms containing it");
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw Error("permutation for " + x + " repeats a label");
}

std::vector<Variable> splice_schema(const std::vector<Variable>& schema, std::size_t col,
                                    const std::vector<std::string>& names, std::size_t count) {
    std::vector<Variable> out(schema.begin(), schema.begin() + col);
    for (std::size_t j = 0; j < count; ++j) out.push_back(Variable{names[j], VarKind::Point});
    out.insert(out.end(), schema.begin() + col + 1, schema.end());
    return out;
}

/**
 * Rows of rel with the x column expanded into i bitstring columns: one output
 * row per (node, split of the node's bits into i parts), nodes being the
 * canonical partition of the row's interval when i < k and the left-endpoint
 * leaf when i = k.
 */
Relation transform_relation(const Relation& rel, const std::string& x, std::size_t i,
                            std::size_t k, const SegmentTree& tree,
                            const std::vector<std::string>& fresh, const std::string& new_label,
                            std::vector<std::size_t>* sources = nullptr) {
    std::size_t col = rel.column(x);
    Relation out;
    out.label = new_label;
    out.schema = splice_schema(rel.schema, col, fresh, i);
    for (std::size_t r = 0; r < rel.rows.size(); ++r) {
        const Tuple& row = rel.rows[r];
        const Interval& cell = std::get<Interval>(row[col]);
        std::vector<NodeId> nodes;
        if (i < k) {
            CanonicalPartition cp = canonical_partition(tree, cell);
            nodes.assign(cp.begin(), cp.end());
        } else {
            nodes.push_back(leaf_of(tree, cell.l));
        }
        for (const NodeId& node : nodes) {
            for (const auto& split : bitstring_splits(node.bits, i)) {
                Tuple t;
                t.reserve(row.size() - 1 + i);
                t.insert(t.end(), row.begin(), row.begin() + col);
                for (const std::string& part : split) t.push_back(Bitstring{part});
                t.insert(t.end(), row.begin() + col + 1, row.end());
                out.rows.push_back(std::move(t));
                if (sources) sources->push_back(r);
            }
        }
    }
    return out;
}

std::vector<std::string> join_interval_vars(const Query& q) {
    std::vector<std::string> vars;
    for (const std::string& name : q.variable_names()) {
        if (q.kind_of(name) == VarKind::Interval && q.atoms_with(name).size() >= 2)
            vars.push_back(name);
    }
    std::sort(vars.begin(), vars.end());
    return vars;
}

/** Fresh names per join variable, mirrored by backward_key_for. */
std::map<std::string, std::vector<std::string>> plan_fresh(const Query& q,
                                                           const std::vector<std::string>& vars) {
    std::vector<std::string> taken = q.variable_names();
    std::map<std::string, std::vector<std::string>> fresh;
    for (const std::string& x : vars) {
        std::vector<std::string> names =
            fresh_point_names(x, q.atoms_with(x).size(), taken);
        taken.insert(taken.end(), names.begin(), names.end());
        fresh[x] = std::move(names);
    }
    return fresh;
}

std::vector<std::string> sorted_labels_with(const Query& q, const std::string& x) {
    std::vector<std::string> labels;
    for (std::size_t i : q.atoms_with(x)) labels.push_back(q.atoms[i].label);
    std::sort(labels.begin(), labels.end());
    return labels;
}

std::string hypergraph_signature(const Hypergraph& h) {
    std::vector<std::string> parts;
    for (const Hyperedge& e : h.edges) {
        std::string s = e.label + "(";
        for (const std::string& v : e.vertices) s += v + ",";
        parts.push_back(s + ")");
    }
    std::sort(parts.begin(), parts.end());
    std::string out;
    for (const std::string& p : parts) out += p + ";";
    return out;
}

}  // namespace

Hypergraph onestep_hypergraph(const Hypergraph& h, const std::string& x,
                              const std::vector<std::string>& sigma) {
    if (!h.has_vertex(x)) throw NotIntervalVariable(x + " is not a vertex");
    require_matching_sigma(h.edges_with(x), sigma, x);
    std::vector<std::string> fresh = fresh_point_names(x, sigma.size(), h.vertices);

    std::vector<Hyperedge> edges;
    for (const Hyperedge& e : h.edges) {
        auto rank = std::find(sigma.begin(), sigma.end(), e.label);
        if (rank == sigma.end() ||
            !std::binary_search(e.vertices.begin(), e.vertices.end(), x)) {
            edges.push_back(e);
            continue;
        }
        std::size_t i = static_cast<std::size_t>(rank - sigma.begin()) + 1;
        Hyperedge out;
        out.label = e.label;
        for (const std::string& v : e.vertices) {
            if (v != x) out.vertices.push_back(v);
        }
        out.vertices.insert(out.vertices.end(), fresh.begin(), fresh.begin() + i);
        edges.push_back(std::move(out));
    }
    return make_hypergraph(std::move(edges));
}

Query onestep_query(const Query& q, const std::string& x,
                    const std::vector<std::string>& sigma) {
    if (q.kind_of(x) != VarKind::Interval)
        throw NotIntervalVariable(x + " is not an interval variable");
    require_matching_sigma(sorted_labels_with(q, x), sigma, x);
    std::vector<std::string> fresh = fresh_point_names(x, sigma.size(), q.variable_names());

    Query out;
    for (const Atom& atom : q.atoms) {
        auto rank = std::find(sigma.begin(), sigma.end(), atom.label);
        auto here = std::find_if(atom.schema.begin(), atom.schema.end(),
                                 [&](const Variable& v) { return v.name == x; });
        if (rank == sigma.end() || here == atom.schema.end()) {
            out.atoms.push_back(atom);
            continue;
        }
        std::size_t i = static_cast<std::size_t>(rank - sigma.begin()) + 1;
        Atom a;
        a.label = extend_label(atom.label, x, static_cast<int>(i));
        a.schema = splice_schema(atom.schema,
                                 static_cast<std::size_t>(here - atom.schema.begin()), fresh, i);
        out.atoms.push_back(std::move(a));
    }
    return out;
}

std::vector<Query> onestep_query_all(const Query& q, const std::string& x) {
    std::vector<std::string> sigma = sorted_labels_with(q, x);
    std::vector<Query> out;
    do {
        out.push_back(onestep_query(q, x, sigma));
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return out;
}

std::vector<std::vector<std::string>> bitstring_splits(const std::string& s, std::size_t parts) {
    if (parts == 0) throw Error("a bitstring splits into at least one part");
    std::vector<std::vector<std::string>> out;
    std::vector<std::size_t> cuts(parts - 1, 0);
    auto emit = [&]() {
        std::vector<std::string> split;
        std::size_t prev = 0;
        for (std::size_t c : cuts) {
            split.push_back(s.substr(prev, c - prev));
            prev = c;
        }
        split.push_back(s.substr(prev));
        out.push_back(std::move(split));
    };
    auto recurse = [&](auto&& self, std::size_t at, std::size_t from) -> void {
        if (at == cuts.size()) {
            emit();
            return;
        }
        for (std::size_t c = from; c <= s.size(); ++c) {
            cuts[at] = c;
            self(self, at + 1, c);
        }
    };
    recurse(recurse, 0, 0);
    return out;
}

Database onestep_database(const Database& db, const Query& q, const std::string& x,
                          const std::vector<std::string>& sigma) {
    if (q.kind_of(x) != VarKind::Interval)
        throw NotIntervalVariable(x + " is not an interval variable");
    require_matching_sigma(sorted_labels_with(q, x), sigma, x);
    validate(db, q);
    std::vector<std::string> fresh = fresh_point_names(x, sigma.size(), q.variable_names());

    std::set<Interval> pool;
    for (const std::string& label : sigma) {
        const Relation& rel = db.at(label);
        std::size_t col = rel.column(x);
        for (const Tuple& row : rel.rows) pool.insert(std::get<Interval>(row[col]));
    }
    SegmentTree tree = build(std::vector<Interval>(pool.begin(), pool.end()));

    Database out;
    for (const auto& [label, rel] : db.relations) {
        auto rank = std::find(sigma.begin(), sigma.end(), label);
        if (rank == sigma.end()) {
            out.relations.emplace(label, rel);
            continue;
        }
        std::size_t i = static_cast<std::size_t>(rank - sigma.begin()) + 1;
        Relation transformed = transform_relation(
            rel, x, i, sigma.size(), tree, fresh,
            extend_label(label, x, static_cast<int>(i)));
        out.relations.emplace(transformed.label, std::move(transformed));
    }
    return out;
}

ReductionTrace reduce_full_traced(const Query& q, const Database& db) {
    check_well_formed(q);
    validate(db, q);
    std::vector<std::string> vars = join_interval_vars(q);
    std::map<std::string, std::vector<std::string>> fresh = plan_fresh(q, vars);

    struct Entry {
        ReducedRelationKey key;
        Relation rel;
        std::vector<std::size_t> prov;  // row -> input row of the base relation
    };
    std::map<std::string, Entry> pool;
    for (const auto& [label, rel] : db.relations) {
        std::vector<std::size_t> identity(rel.rows.size());
        for (std::size_t r = 0; r < identity.size(); ++r) identity[r] = r;
        pool.emplace(label, Entry{ReducedRelationKey{label, {}}, rel, std::move(identity)});
    }

    std::vector<Query> queries{q};
    for (const std::string& x : vars) {
        std::vector<std::string> bases = sorted_labels_with(q, x);
        std::size_t k = bases.size();
        auto involved = [&](const Entry& e) {
            return std::binary_search(bases.begin(), bases.end(), e.key.base);
        };

        std::set<Interval> cells;
        for (const auto& [label, entry] : pool) {
            if (!involved(entry)) continue;
            std::size_t col = entry.rel.column(x);
            for (const Tuple& row : entry.rel.rows)
                cells.insert(std::get<Interval>(row[col]));
        }
        SegmentTree tree = build(std::vector<Interval>(cells.begin(), cells.end()));

        std::map<std::string, Entry> next;
        for (const auto& [label, entry] : pool) {
            if (!involved(entry)) {
                next.emplace(label, entry);
                continue;
            }
            for (std::size_t i = 1; i <= k; ++i) {
                ReducedRelationKey key = entry.key;
                key.positions.emplace_back(x, static_cast<int>(i));
                std::string new_label = key.render();
                std::vector<std::size_t> sources;
                Relation rel =
                    transform_relation(entry.rel, x, i, k, tree, fresh.at(x), new_label, &sources);
                for (std::size_t& s : sources) s = entry.prov[s];
                if (!next.emplace(new_label,
                                  Entry{std::move(key), std::move(rel), std::move(sources)})
                         .second)
                    throw Error("relation label collision on " + new_label);
            }
        }
        pool = std::move(next);

        std::vector<Query> expanded;
        for (const Query& member : queries) {
            // The member's labels for x carry the position suffixes of the
            // variables resolved so far, so the permutation must range over
            // the member's own labels, not the base ones.
            std::vector<std::string> sigma = sorted_labels_with(member, x);
            do {
                expanded.push_back(onestep_query(member, x, sigma));
            } while (std::next_permutation(sigma.begin(), sigma.end()));
        }
        queries = std::move(expanded);
    }

    ReductionTrace trace;
    ReductionOutput& out = trace.output;
    out.queries = std::move(queries);
    for (auto& [label, entry] : pool) {
        out.database.relations.emplace(label, std::move(entry.rel));
        trace.provenance.emplace(label, std::move(entry.prov));
    }
    std::set<std::string> seen;
    for (const Query& member : out.queries) {
        Hypergraph h = hypergraph_of(member);
        if (seen.insert(hypergraph_signature(h)).second) out.hypergraphs.push_back(std::move(h));
    }
    return trace;
}

ReductionOutput reduce_full(const Query& q, const Database& db) {
    return reduce_full_traced(q, db).output;
}

std::vector<Hypergraph> tau(const Hypergraph& h) {
    std::vector<std::string> vars;
    for (const std::string& v : h.vertices) {
        if (h.degree(v) >= 2) vars.push_back(v);
    }
    std::sort(vars.begin(), vars.end());

    std::vector<Hypergraph> members{h};
    for (const std::string& x : vars) {
        std::vector<std::string> base = h.edges_with(x);
        std::sort(base.begin(), base.end());
        std::vector<Hypergraph> expanded;
        for (const Hypergraph& member : members) {
            std::vector<std::string> sigma = base;
            do {
                expanded.push_back(onestep_hypergraph(member, x, sigma));
            } while (std::next_permutation(sigma.begin(), sigma.end()));
        }
        members = std::move(expanded);
    }

    std::vector<Hypergraph> out;
    std::set<std::string> seen;
    for (Hypergraph& member : members) {
        if (seen.insert(hypergraph_signature(member)).second) out.push_back(std::move(member));
    }
    return out;
}

std::vector<Query> simplify(const std::vector<Query>& queries) {
    std::vector<Query> out;
    std::set<std::string> seen;
    for (const Query& q : queries) {
        std::map<std::string, int> occurrences;
        for (const Atom& atom : q.atoms) {
            for (const Variable& v : atom.schema) ++occurrences[v.name];
        }
        Query projected;
        for (const Atom& atom : q.atoms) {
            Atom a;
            a.label = atom.label;
            for (const Variable& v : atom.schema) {
                if (occurrences[v.name] > 1) a.schema.push_back(v);
            }
            projected.atoms.push_back(std::move(a));
        }
        std::vector<std::string> parts;
        for (const Atom& atom : projected.atoms) {
            std::string s = ReducedRelationKey::parse(atom.label).base + "(";
            for (const Variable& v : atom.schema)
                s += (v.kind == VarKind::Interval ? "[" + v.name + "]" : v.name) + ",";
            parts.push_back(s + ")");
        }
        std::sort(parts.begin(), parts.end());
        std::string signature;
        for (const std::string& p : parts) signature += p + ";";
        if (seen.insert(signature).second) out.push_back(std::move(projected));
    }
    return out;
}

BackwardTargetKey backward_key_for(const Query& ij_query) {
    check_well_formed(ij_query);
    BackwardTargetKey key;
    key.ij_query = ij_query;
    key.groups = plan_fresh(ij_query, join_interval_vars(ij_query));
    return key;
}

std::pair<Query, Database> backward_transform(const Query& q_ej, const Database& db_ej,
                                              const BackwardTargetKey& target) {
    check_well_formed(q_ej);
    validate(db_ej, q_ej);
    for (const Atom& atom : target.ij_query.atoms) {
        if (atom.label.find('#') != std::string::npos)
            throw SelfJoinUnsupported("target query self-joins on " +
                                      ReducedRelationKey::parse(atom.label).base);
    }

    // Pair every target atom with the q_ej atom sharing its base label and
    // work out how many fresh columns each resolved variable occupies there.
    struct AtomPlan {
        const Atom* ej = nullptr;
        // per target schema position: either the matching ej column (for
        // copied variables) or the group columns to concatenate
        std::vector<std::vector<std::size_t>> sources;
    };
    std::vector<AtomPlan> plans;
    for (const Atom& atom : target.ij_query.atoms) {
        AtomPlan plan;
        for (const Atom& ej : q_ej.atoms) {
            if (ReducedRelationKey::parse(ej.label).base != atom.label) continue;
            if (plan.ej) throw Error("two atoms of the reduced query share base " + atom.label);
            plan.ej = &ej;
        }
        if (!plan.ej) throw Error("no atom of the reduced query has base " + atom.label);

        std::size_t at = 0;
        const std::vector<Variable>& ej_schema = plan.ej->schema;
        for (const Variable& v : atom.schema) {
            auto group = target.groups.find(v.name);
            if (group == target.groups.end()) {
                if (at >= ej_schema.size() || ej_schema[at].name != v.name)
                    throw Error("schema of " + plan.ej->label + " does not match " + atom.label);
                plan.sources.push_back({at++});
                continue;
            }
            std::vector<std::size_t> cols;
            for (const std::string& name : group->second) {
                if (at < ej_schema.size() && ej_schema[at].name == name) cols.push_back(at++);
                else break;
            }
            if (cols.empty())
                throw Error("no columns for " + v.name + " in " + plan.ej->label);
            plan.sources.push_back(std::move(cols));
        }
        if (at != ej_schema.size())
            throw Error("schema of " + plan.ej->label + " does not match " + atom.label);
        plans.push_back(std::move(plan));
    }

    // Uniform bitstring length across the whole database, as the dyadic
    // prefix argument requires.
    std::size_t length = 0;
    bool saw_bits = false;
    for (const auto& [label, rel] : db_ej.relations) {
        for (const Tuple& row : rel.rows) {
            for (const Value& cell : row) {
                if (const Bitstring* b = std::get_if<Bitstring>(&cell)) {
                    if (saw_bits && b->bits.size() != length)
                        throw MixedBitstringLengths(
                            "bitstring values of mixed lengths in " + label);
                    length = b->bits.size();
                    saw_bits = true;
                }
            }
        }
    }

    // First produce left-closed right-open dyadic pieces of [0,1), then
    // close them with a gap-safe epsilon.
    struct OpenInterval {
        Rational lo, hi;
    };
    auto dyadic = [](const std::string& bits) {
        Rational lo = 0;
        Rational width = 1;
        for (char c : bits) {
            width /= 2;
            if (c == '1') lo += width;
        }
        return OpenInterval{lo, lo + width};
    };

    std::vector<std::vector<std::vector<std::variant<Value, OpenInterval>>>> staged;
    std::vector<Rational> endpoints;
    std::size_t produced = 0;
    for (std::size_t a = 0; a < plans.size(); ++a) {
        const AtomPlan& plan = plans[a];
        const Atom& atom = target.ij_query.atoms[a];
        const Relation& rel = db_ej.at(plan.ej->label);
        std::vector<std::vector<std::variant<Value, OpenInterval>>> rows;
        for (const Tuple& row : rel.rows) {
            std::vector<std::variant<Value, OpenInterval>> cells;
            for (std::size_t p = 0; p < plan.sources.size(); ++p) {
                const std::vector<std::size_t>& cols = plan.sources[p];
                if (!target.groups.count(atom.schema[p].name)) {
                    cells.emplace_back(row[cols[0]]);
                    continue;
                }
                std::string bits;
                for (std::size_t c : cols) {
                    const Bitstring* b = std::get_if<Bitstring>(&row[c]);
                    if (!b)
                        throw KindMismatch("column " + std::to_string(c + 1) + " of " +
                                           rel.label + " must hold bitstrings");
                    bits += b->bits;
                }
                OpenInterval piece = dyadic(bits);
                endpoints.push_back(piece.lo);
                endpoints.push_back(piece.hi);
                ++produced;
                cells.emplace_back(piece);
            }
            rows.push_back(std::move(cells));
        }
        staged.push_back(std::move(rows));
    }

    std::sort(endpoints.begin(), endpoints.end());
    endpoints.erase(std::unique(endpoints.begin(), endpoints.end()), endpoints.end());
    Rational gap = 1;
    for (std::size_t i = 1; i < endpoints.size(); ++i) {
        Rational d = endpoints[i] - endpoints[i - 1];
        if (i == 1 || d < gap) gap = d;
    }
    Rational eps = gap / (4 * (Rational(produced) + 1));

    Database out;
    for (std::size_t a = 0; a < plans.size(); ++a) {
        const Atom& atom = target.ij_query.atoms[a];
        Relation rel;
        rel.label = atom.label;
        rel.schema = atom.schema;
        for (const auto& cells : staged[a]) {
            Tuple row;
            for (const auto& cell : cells) {
                if (const Value* v = std::get_if<Value>(&cell)) {
                    row.push_back(*v);
                } else {
                    const OpenInterval& piece = std::get<OpenInterval>(cell);
                    row.push_back(Interval{piece.lo, piece.hi - eps});
                }
            }
            rel.rows.push_back(std::move(row));
        }
        out.relations.emplace(rel.label, std::move(rel));
    }
    // Relations beyond the target's atoms pass through untouched.
    for (const auto& [label, rel] : db_ej.relations) {
        bool used = std::any_of(plans.begin(), plans.end(), [&](const AtomPlan& p) {
            return p.ej->label == label;
        });
        if (!used) out.relations.emplace(label, rel);
    }
    return {target.ij_query, std::move(out)};
}

std::pair<Query, Database> embed_cycle_query(const Query& target, std::size_t k,
                                             const Database& cycle_db) {
    check_well_formed(target);
    if (k < 3) throw Error("cycle embedding needs length >= 3");
    if (cycle_db.relations.size() != k)
        throw Error("expected " + std::to_string(k) + " cycle relations, got " +
                    std::to_string(cycle_db.relations.size()));

    Hypergraph h = hypergraph_of(target);
    std::optional<BergeCycle> cycle = find_berge_cycle(h, k, k);
    if (!cycle)
        throw NoBergeCycle("target has no Berge cycle of length " + std::to_string(k));

    std::vector<const Relation*> chain;
    for (const auto& [label, rel] : cycle_db.relations) {
        if (rel.schema.size() != 2)
            throw ArityMismatch("cycle relation " + label + " must be binary");
        chain.push_back(&rel);
    }

    Rational bound = 0;
    for (const Relation* rel : chain) {
        for (const Tuple& row : rel->rows) {
            for (const Value& cell : row) {
                const Rational* p = std::get_if<Rational>(&cell);
                if (!p) throw KindMismatch("cycle relations must hold plain numbers");
                Rational mag = *p < 0 ? Rational(-*p) : *p;
                if (mag > bound) bound = mag;
            }
        }
    }
    Rational big = bound + 1;

    auto filler = [&](const Variable& v) -> Value {
        if (v.kind == VarKind::Interval) return Interval{-big, big};
        return Rational(0);
    };
    auto pin = [&](const Variable& v, const Rational& p) -> Value {
        if (v.kind == VarKind::Interval) return Interval{p, p};
        return p;
    };

    Database out;
    for (const Atom& atom : target.atoms) {
        Relation rel;
        rel.label = atom.label;
        rel.schema = atom.schema;
        auto at = std::find(cycle->edge_labels.begin(), cycle->edge_labels.end(), atom.label);
        if (at == cycle->edge_labels.end()) {
            Tuple row;
            for (const Variable& v : atom.schema) row.push_back(filler(v));
            rel.rows.push_back(std::move(row));
        } else {
            std::size_t i = static_cast<std::size_t>(at - cycle->edge_labels.begin());
            const std::string& incoming = cycle->vertices[(i + k - 1) % k];
            const std::string& outgoing = cycle->vertices[i];
            for (const Tuple& pair : chain[i]->rows) {
                const Rational& a = std::get<Rational>(pair[0]);
                const Rational& b = std::get<Rational>(pair[1]);
                Tuple row;
                for (const Variable& v : atom.schema) {
                    if (v.name == incoming) row.push_back(pin(v, a));
                    else if (v.name == outgoing) row.push_back(pin(v, b));
                    else row.push_back(filler(v));
                }
                rel.rows.push_back(std::move(row));
            }
        }
        out.relations.emplace(rel.label, std::move(rel));
    }
    return {target, std::move(out)};
}

bool is_iota_acyclic_semantic(const Hypergraph& h) {
    double members = 1;
    for (const std::string& v : h.vertices) {
        std::size_t d = h.degree(v);
        for (std::size_t i = 2; i <= d; ++i) members *= static_cast<double>(i);
        if (members > 1e5)
            throw SizeLimitExceeded("tau enumeration too large for the semantic check");
    }
    std::vector<Hypergraph> all = tau(h);
    return std::all_of(all.begin(), all.end(),
                       [](const Hypergraph& m) { return is_alpha_acyclic(m); });
}

}  // namespace ijq
