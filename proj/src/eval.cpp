#include "ijq/eval.hpp"

#include "ijq/acyclicity.hpp"
#include "ijq/errors.hpp"
#include "ijq/hypergraph.hpp"
#include "ijq/reduction.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstddef>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <utility>

namespace ijq {

namespace {

using Assignment = std::map<std::string, Value>;
using WitnessRows = std::map<std::string, std::size_t>;

void require(bool ok, const std::string& what) {
    if (!ok) throw Error("internal invariant failed: " + what);
}

bool value_less(const Value& a, const Value& b) {
    if (a.index() != b.index()) return a.index() < b.index();
    switch (a.index()) {
        case 0:
            return std::get<Rational>(a) < std::get<Rational>(b);
        case 1: {
            const Interval& x = std::get<Interval>(a);
            const Interval& y = std::get<Interval>(b);
            if (x.l != y.l) return x.l < y.l;
            return x.r < y.r;
        }
        default:
            return std::get<Bitstring>(a).bits < std::get<Bitstring>(b).bits;
    }
}

bool tuple_less(const Tuple& a, const Tuple& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), value_less);
}

Tuple project(const Tuple& row, const std::vector<std::size_t>& cols) {
    Tuple t;
    t.reserve(cols.size());
    for (std::size_t c : cols) t.push_back(row[c]);
    return t;
}

/**
 * Equality engines handle unshared interval columns as opaque payload, but an
 * interval variable joining two atoms needs the reduction first.
 */
void require_point_joins_only(const Query& q) {
    for (const std::string& v : q.variable_names())
        if (q.kind_of(v) == VarKind::Interval && q.atoms_with(v).size() >= 2)
            throw KindMismatch("interval variable " + v +
                               " is shared by several atoms; resolve it before equality evaluation");
}

struct VarOccurrence {
    std::size_t atom = 0;
    std::size_t col = 0;
};

std::map<std::string, std::vector<VarOccurrence>> occurrences(const Query& q) {
    std::map<std::string, std::vector<VarOccurrence>> occ;
    for (std::size_t a = 0; a < q.atoms.size(); ++a)
        for (std::size_t c = 0; c < q.atoms[a].schema.size(); ++c)
            occ[q.atoms[a].schema[c].name].push_back({a, c});
    return occ;
}

/** The per-variable semantics applied to one fixed row per atom. */
bool rows_satisfy(const Query& q, const std::vector<const Relation*>& rels,
                  const std::vector<std::size_t>& idx) {
    for (const auto& [name, occ] : occurrences(q)) {
        if (q.atoms[occ.front().atom].schema[occ.front().col].kind == VarKind::Interval) {
            std::vector<Interval> cells;
            cells.reserve(occ.size());
            for (const VarOccurrence& o : occ)
                cells.push_back(std::get<Interval>(rels[o.atom]->rows[idx[o.atom]][o.col]));
            if (!intersect_all(cells)) return false;
        } else {
            const Value& first = rels[occ.front().atom]->rows[idx[occ.front().atom]][occ.front().col];
            for (std::size_t i = 1; i < occ.size(); ++i) {
                const VarOccurrence& o = occ[i];
                if (!(rels[o.atom]->rows[idx[o.atom]][o.col] == first)) return false;
            }
        }
    }
    return true;
}

std::optional<WitnessRows> oracle_search(const Query& q, const Database& db,
                                         std::size_t max_cells) {
    check_well_formed(q);
    validate(db, q);
    std::vector<const Relation*> rels;
    rels.reserve(q.atoms.size());
    std::size_t cells = 1;
    for (const Atom& a : q.atoms) {
        const Relation& rel = db.at(a.label);
        if (rel.rows.empty()) return std::nullopt;
        if (cells > max_cells / rel.rows.size())
            throw TooLargeForOracle("exhaustive check needs more than " +
                                    std::to_string(max_cells) + " tuple combinations");
        cells *= rel.rows.size();
        rels.push_back(&rel);
    }

    std::vector<std::size_t> idx(q.atoms.size(), 0);
    while (true) {
        if (rows_satisfy(q, rels, idx)) {
            WitnessRows rows;
            for (std::size_t a = 0; a < q.atoms.size(); ++a) rows[q.atoms[a].label] = idx[a];
            return rows;
        }
        std::size_t d = 0;
        while (d < idx.size()) {
            if (++idx[d] < rels[d]->rows.size()) break;
            idx[d] = 0;
            ++d;
        }
        if (d == idx.size()) return std::nullopt;
    }
}

// --- join along a tree (join tree of atoms, or decomposition bags) ----------

struct TreeNode {
    std::vector<std::string> vars;
    const std::vector<Tuple>* rows = nullptr;
};

/** Column pairs (in u, in c) of the variables the two nodes share. */
std::vector<std::pair<std::size_t, std::size_t>> shared_columns(
    const std::vector<std::string>& vars_u, const std::vector<std::string>& vars_c) {
    std::vector<std::pair<std::size_t, std::size_t>> cols;
    for (std::size_t i = 0; i < vars_u.size(); ++i) {
        auto it = std::find(vars_c.begin(), vars_c.end(), vars_u[i]);
        if (it != vars_c.end())
            cols.emplace_back(i, static_cast<std::size_t>(it - vars_c.begin()));
    }
    return cols;
}

/**
 * One bottom-up semi-join pass, then a top-down row selection. Children are
 * fully reduced before their parent filters against them, so every surviving
 * parent row has a matching child row and the selection never backtracks.
 * Returns one row index per node, or nullopt when some live set empties.
 */
std::optional<std::vector<std::size_t>> tree_join(
    const std::vector<TreeNode>& nodes,
    const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
    require(!nodes.empty(), "tree join over zero nodes");
    const std::size_t n = nodes.size();
    for (const TreeNode& node : nodes)
        if (node.rows->empty()) return std::nullopt;

    std::vector<std::vector<std::size_t>> adj(n);
    for (const auto& [a, b] : edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    std::vector<std::size_t> order;
    std::vector<std::size_t> parent(n, n);
    std::vector<char> seen(n, 0);
    order.push_back(0);
    seen[0] = 1;
    for (std::size_t head = 0; head < order.size(); ++head)
        for (std::size_t next : adj[order[head]])
            if (!seen[next]) {
                seen[next] = 1;
                parent[next] = order[head];
                order.push_back(next);
            }
    require(order.size() == n, "tree join over a disconnected tree");

    std::vector<std::vector<std::size_t>> live(n);
    for (std::size_t i = 0; i < n; ++i) {
        live[i].resize(nodes[i].rows->size());
        for (std::size_t r = 0; r < live[i].size(); ++r) live[i][r] = r;
    }
    for (std::size_t pos = n; pos-- > 0;) {
        std::size_t u = order[pos];
        for (std::size_t c : adj[u]) {
            if (parent[c] != u) continue;
            auto cols = shared_columns(nodes[u].vars, nodes[c].vars);
            std::vector<std::size_t> cols_u, cols_c;
            for (const auto& [cu, cc] : cols) {
                cols_u.push_back(cu);
                cols_c.push_back(cc);
            }
            std::vector<Tuple> keys;
            keys.reserve(live[c].size());
            for (std::size_t r : live[c]) keys.push_back(project((*nodes[c].rows)[r], cols_c));
            std::sort(keys.begin(), keys.end(), tuple_less);
            keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
            std::vector<std::size_t> kept;
            for (std::size_t r : live[u])
                if (std::binary_search(keys.begin(), keys.end(),
                                       project((*nodes[u].rows)[r], cols_u), tuple_less))
                    kept.push_back(r);
            live[u] = std::move(kept);
            if (live[u].empty()) return std::nullopt;
        }
    }

    std::vector<std::size_t> choice(n, 0);
    choice[0] = live[0].front();
    for (std::size_t pos = 1; pos < n; ++pos) {
        std::size_t u = order[pos];
        std::size_t p = parent[u];
        auto cols = shared_columns(nodes[p].vars, nodes[u].vars);
        const Tuple& chosen = (*nodes[p].rows)[choice[p]];
        bool found = false;
        for (std::size_t r : live[u]) {
            bool match = true;
            for (const auto& [cp, cu] : cols)
                if (!((*nodes[u].rows)[r][cu] == chosen[cp])) {
                    match = false;
                    break;
                }
            if (match) {
                choice[u] = r;
                found = true;
                break;
            }
        }
        require(found, "semi-join pass left a parent row without a child match");
    }
    return choice;
}

// --- ordered multiway join ---------------------------------------------------

/** One relation prepared for the ordered join: columns are the positions of
 *  its variables in the global order, rows are projected accordingly. */
struct OrderedRelation {
    std::vector<std::size_t> depths;  // strictly increasing
    std::vector<Tuple> rows;          // sorted lexicographically, deduplicated
};

/**
 * Enumerates assignments depth by depth: the atoms containing the current
 * variable intersect their candidate values, everything else is untouched.
 * Rows are sorted, so each narrowing is a binary search in the active range.
 * Stops, returning true, as soon as visit does.
 */
template <class Visit>
bool ordered_descend(const std::vector<OrderedRelation>& inputs, std::size_t depth_count,
                     std::size_t d, std::vector<std::pair<std::size_t, std::size_t>>& ranges,
                     Tuple& current, Visit&& visit) {
    if (d == depth_count) return visit(const_cast<const Tuple&>(current));
    std::vector<std::pair<std::size_t, std::size_t>> at;  // (input, its column for depth d)
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        const auto& depths = inputs[i].depths;
        auto it = std::lower_bound(depths.begin(), depths.end(), d);
        if (it != depths.end() && *it == d)
            at.emplace_back(i, static_cast<std::size_t>(it - depths.begin()));
    }
    require(!at.empty(), "join variable not covered by any relation");

    std::size_t driver = at.front().first;
    std::size_t driver_col = at.front().second;
    for (const auto& [i, c] : at)
        if (ranges[i].second - ranges[i].first < ranges[driver].second - ranges[driver].first) {
            driver = i;
            driver_col = c;
        }

    const auto& rows = inputs[driver].rows;
    std::size_t pos = ranges[driver].first;
    while (pos < ranges[driver].second) {
        const Value& v = rows[pos][driver_col];
        std::size_t run = pos + 1;
        while (run < ranges[driver].second && rows[run][driver_col] == v) ++run;

        bool viable = true;
        std::vector<std::pair<std::size_t, std::size_t>> narrowed = ranges;
        for (const auto& [i, c] : at) {
            if (i == driver) {
                narrowed[i] = {pos, run};
                continue;
            }
            const auto& other = inputs[i].rows;
            auto less_col = [c](const Tuple& t, const Value& val) { return value_less(t[c], val); };
            auto greater_col = [c](const Value& val, const Tuple& t) { return value_less(val, t[c]); };
            std::size_t lo = static_cast<std::size_t>(
                std::lower_bound(other.begin() + ranges[i].first, other.begin() + ranges[i].second,
                                 v, less_col) -
                other.begin());
            std::size_t hi = static_cast<std::size_t>(
                std::upper_bound(other.begin() + lo, other.begin() + ranges[i].second, v,
                                 greater_col) -
                other.begin());
            if (lo == hi) {
                viable = false;
                break;
            }
            narrowed[i] = {lo, hi};
        }
        if (viable) {
            current[d] = v;
            if (ordered_descend(inputs, depth_count, d + 1, narrowed, current, visit)) return true;
        }
        pos = run;
    }
    return false;
}

template <class Visit>
bool ordered_join(const std::vector<OrderedRelation>& inputs, std::size_t depth_count,
                  Visit&& visit) {
    std::vector<std::pair<std::size_t, std::size_t>> ranges;
    ranges.reserve(inputs.size());
    for (const OrderedRelation& rel : inputs) ranges.emplace_back(0, rel.rows.size());
    Tuple current(depth_count);
    return ordered_descend(inputs, depth_count, 0, ranges, current, visit);
}

/** Atoms projected onto the ordered variables they contain. Atoms with no
 *  ordered variable impose no constraint and are skipped. */
std::vector<OrderedRelation> prepare_inputs(const Query& q, const Database& db,
                                            const std::map<std::string, std::size_t>& depth_of) {
    std::vector<OrderedRelation> inputs;
    for (const Atom& atom : q.atoms) {
        std::vector<std::pair<std::size_t, std::size_t>> cols;  // (depth, column)
        for (std::size_t c = 0; c < atom.schema.size(); ++c) {
            auto it = depth_of.find(atom.schema[c].name);
            if (it != depth_of.end()) cols.emplace_back(it->second, c);
        }
        if (cols.empty()) continue;
        std::sort(cols.begin(), cols.end());
        OrderedRelation rel;
        std::vector<std::size_t> proj;
        for (const auto& [depth, col] : cols) {
            rel.depths.push_back(depth);
            proj.push_back(col);
        }
        const Relation& source = db.at(atom.label);
        rel.rows.reserve(source.rows.size());
        for (const Tuple& row : source.rows) rel.rows.push_back(project(row, proj));
        std::sort(rel.rows.begin(), rel.rows.end(), tuple_less);
        rel.rows.erase(std::unique(rel.rows.begin(), rel.rows.end()), rel.rows.end());
        inputs.push_back(std::move(rel));
    }
    return inputs;
}

/** Point variables ordered by decreasing atom degree, name as tie break. */
std::vector<std::string> point_variable_order(const Query& q) {
    std::vector<std::string> order;
    for (const std::string& v : q.variable_names())
        if (q.kind_of(v) == VarKind::Point) order.push_back(v);
    std::map<std::string, std::size_t> degree;
    for (const std::string& v : order) degree[v] = q.atoms_with(v).size();
    std::sort(order.begin(), order.end(), [&](const std::string& a, const std::string& b) {
        if (degree[a] != degree[b]) return degree[a] > degree[b];
        return a < b;
    });
    return order;
}

std::optional<Assignment> wcoj_search(const Query& q, const Database& db) {
    std::vector<std::string> order = point_variable_order(q);
    std::map<std::string, std::size_t> depth_of;
    for (std::size_t d = 0; d < order.size(); ++d) depth_of[order[d]] = d;
    std::vector<OrderedRelation> inputs = prepare_inputs(q, db, depth_of);

    std::optional<Assignment> found;
    ordered_join(inputs, order.size(), [&](const Tuple& t) {
        Assignment a;
        for (std::size_t d = 0; d < order.size(); ++d) a.emplace(order[d], t[d]);
        found = std::move(a);
        return true;
    });
    return found;
}

/** All assignments over the bag's variables consistent with every atom that
 *  overlaps the bag, as tuples in the bag's variable order. */
std::vector<Tuple> materialise_bag(const Query& q, const Database& db,
                                   const std::vector<std::string>& bag) {
    std::map<std::string, std::size_t> depth_of;
    for (std::size_t d = 0; d < bag.size(); ++d) depth_of[bag[d]] = d;
    std::vector<OrderedRelation> inputs = prepare_inputs(q, db, depth_of);
    std::vector<Tuple> rows;
    ordered_join(inputs, bag.size(), [&](const Tuple& t) {
        rows.push_back(t);
        return false;
    });
    return rows;
}

/**
 * Decomposition-based evaluation core. Bags may cover only the shared
 * variables of the query: a glued bag assignment fixes, for every atom, the
 * values of all its shared columns, and any row matching those is a full
 * match because unshared columns never join.
 */
std::optional<Assignment> decomp_core(const Query& q, const Database& db,
                                      const TreeDecomposition& td) {
    std::vector<std::vector<Tuple>> bag_rows;
    bag_rows.reserve(td.bags.size());
    std::vector<TreeNode> nodes;
    nodes.reserve(td.bags.size());
    for (const VertexSet& bag : td.bags) bag_rows.push_back(materialise_bag(q, db, bag));
    for (std::size_t i = 0; i < td.bags.size(); ++i)
        nodes.push_back(TreeNode{td.bags[i], &bag_rows[i]});

    auto choice = tree_join(nodes, td.edges);
    if (!choice) return std::nullopt;
    Assignment glued;
    for (std::size_t i = 0; i < td.bags.size(); ++i)
        for (std::size_t j = 0; j < td.bags[i].size(); ++j)
            glued.emplace(td.bags[i][j], bag_rows[i][(*choice)[i]][j]);
    return glued;
}

std::optional<WitnessRows> yannakakis_search(const Query& q, const Database& db) {
    check_well_formed(q);
    validate(db, q);
    require_point_joins_only(q);
    std::optional<JoinTree> tree = build_join_tree(hypergraph_of(q));
    if (!tree) throw NotAcyclic("query is not alpha-acyclic; no join tree exists");
    require(tree->labels.size() == q.atoms.size(), "join tree misses an atom");

    for (const Atom& atom : q.atoms)
        if (db.at(atom.label).rows.empty()) return std::nullopt;

    std::map<std::string, const Atom*> by_label;
    for (const Atom& atom : q.atoms) by_label[atom.label] = &atom;
    std::vector<TreeNode> nodes;
    nodes.reserve(tree->labels.size());
    for (const std::string& label : tree->labels) {
        const Atom* atom = by_label.at(label);
        std::vector<std::string> vars;
        vars.reserve(atom->schema.size());
        for (const Variable& v : atom->schema) vars.push_back(v.name);
        nodes.push_back(TreeNode{std::move(vars), &db.at(label).rows});
    }

    auto choice = tree_join(nodes, tree->edges);
    if (!choice) return std::nullopt;
    WitnessRows rows;
    for (std::size_t i = 0; i < tree->labels.size(); ++i) rows[tree->labels[i]] = (*choice)[i];
    return rows;
}

/** First row agreeing with the assignment on every assigned column. */
std::size_t matching_row(const Relation& rel, const std::vector<Variable>& schema,
                         const Assignment& a) {
    std::vector<std::pair<std::size_t, const Value*>> checks;
    for (std::size_t c = 0; c < schema.size(); ++c) {
        auto it = a.find(schema[c].name);
        if (it != a.end()) checks.emplace_back(c, &it->second);
    }
    for (std::size_t r = 0; r < rel.rows.size(); ++r) {
        bool match = true;
        for (const auto& [c, v] : checks)
            if (!(rel.rows[r][c] == *v)) {
                match = false;
                break;
            }
        if (match) return r;
    }
    throw Error("internal invariant failed: no row of " + rel.label +
                " matches the join assignment");
}

// --- sub-query planning and dispatch -----------------------------------------

struct MemberPlan {
    enum class Kind { EmptyInput, JoinTree, Decomposition, GenericJoin };
    std::string name;
    Kind kind = Kind::GenericJoin;
    TreeDecomposition td;  // Decomposition only
};

const char* engine_name(MemberPlan::Kind kind) {
    switch (kind) {
        case MemberPlan::Kind::EmptyInput: return "empty-relation";
        case MemberPlan::Kind::JoinTree: return "join-tree";
        case MemberPlan::Kind::Decomposition: return "decomposition";
        default: return "generic-join";
    }
}

std::string member_name(const Query& q) {
    std::string name;
    for (const Atom& atom : q.atoms) {
        if (!name.empty()) name += ' ';
        name += atom.label;
    }
    return name;
}

bool any_relation_empty(const Query& q, const Database& db) {
    for (const Atom& atom : q.atoms)
        if (db.at(atom.label).rows.empty()) return true;
    return false;
}

MemberPlan plan_member(const Query& member, const Database& db, const EvalOptions& options) {
    MemberPlan plan;
    plan.name = member_name(member);
    Hypergraph h = hypergraph_of(member);

    if (options.strategy == Strategy::ReduceYannakakis) {
        if (!is_alpha_acyclic(h))
            throw NotAcyclic("sub-query " + plan.name + " is not alpha-acyclic; no join tree exists");
        plan.kind = any_relation_empty(member, db) ? MemberPlan::Kind::EmptyInput
                                                   : MemberPlan::Kind::JoinTree;
        return plan;
    }
    if (options.strategy == Strategy::ReduceDecomp) {
        plan.td = fhtw(drop_singleton_vertices(h)).witness;
        plan.kind = any_relation_empty(member, db) ? MemberPlan::Kind::EmptyInput
                                                   : MemberPlan::Kind::Decomposition;
        return plan;
    }

    if (any_relation_empty(member, db)) {
        plan.kind = MemberPlan::Kind::EmptyInput;
        return plan;
    }
    if (is_alpha_acyclic(h)) {
        plan.kind = MemberPlan::Kind::JoinTree;
        return plan;
    }
    Hypergraph shared = drop_singleton_vertices(h);
    if (shared.vertices.size() <= std::min<std::size_t>(options.vertex_cap, 10)) {
        plan.td = fhtw(shared).witness;
        plan.kind = MemberPlan::Kind::Decomposition;
        return plan;
    }
    plan.kind = MemberPlan::Kind::GenericJoin;
    return plan;
}

std::optional<WitnessRows> run_member(const Query& member, const Database& db,
                                      const MemberPlan& plan) {
    switch (plan.kind) {
        case MemberPlan::Kind::EmptyInput:
            return std::nullopt;
        case MemberPlan::Kind::JoinTree:
            return yannakakis_search(member, db);
        case MemberPlan::Kind::Decomposition: {
            check_well_formed(member);
            validate(db, member);
            require_point_joins_only(member);
            std::optional<Assignment> glued = decomp_core(member, db, plan.td);
            if (!glued) return std::nullopt;
            WitnessRows rows;
            for (const Atom& atom : member.atoms)
                rows[atom.label] = matching_row(db.at(atom.label), atom.schema, *glued);
            return rows;
        }
        default: {
            check_well_formed(member);
            validate(db, member);
            require_point_joins_only(member);
            if (any_relation_empty(member, db)) return std::nullopt;
            std::optional<Assignment> a = wcoj_search(member, db);
            if (!a) return std::nullopt;
            WitnessRows rows;
            for (const Atom& atom : member.atoms)
                rows[atom.label] = matching_row(db.at(atom.label), atom.schema, *a);
            return rows;
        }
    }
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

bool oracle_eval(const Query& q, const Database& db, std::size_t max_cells) {
    return oracle_search(q, db, max_cells).has_value();
}

bool check_witness(const Query& q, const Database& db,
                   const std::map<std::string, std::size_t>& rows) {
    check_well_formed(q);
    validate(db, q);
    std::vector<const Relation*> rels;
    std::vector<std::size_t> idx;
    for (const Atom& atom : q.atoms) {
        auto it = rows.find(atom.label);
        if (it == rows.end()) throw Error("witness misses a row for " + atom.label);
        const Relation& rel = db.at(atom.label);
        if (it->second >= rel.rows.size())
            throw Error("witness row " + std::to_string(it->second) + " is out of range for " +
                        atom.label);
        rels.push_back(&rel);
        idx.push_back(it->second);
    }
    return rows_satisfy(q, rels, idx);
}

bool yannakakis_bool(const Query& q, const Database& db) {
    return yannakakis_search(q, db).has_value();
}

bool wcoj_bool(const Query& q, const Database& db) {
    check_well_formed(q);
    validate(db, q);
    require_point_joins_only(q);
    if (any_relation_empty(q, db)) return false;
    return wcoj_search(q, db).has_value();
}

bool decomp_eval(const Query& q, const Database& db, const TreeDecomposition& td) {
    check_well_formed(q);
    validate(db, q);
    require_point_joins_only(q);
    Hypergraph h = hypergraph_of(q);
    if (!is_valid_decomposition(h, td))
        throw InvalidDecomposition("tree decomposition does not fit the query");
    for (const VertexSet& bag : td.bags)
        for (const std::string& v : bag)
            if (!h.has_vertex(v))
                throw InvalidDecomposition("bag names unknown variable " + v);
    if (any_relation_empty(q, db)) return false;
    return decomp_core(q, db, td).has_value();
}

EvalReport eval_ij(const Query& q, const Database& db, const EvalOptions& options) {
    check_well_formed(q);
    validate(db, q);
    EvalReport report;

    if (options.strategy == Strategy::OracleOnly) {
        auto start = std::chrono::steady_clock::now();
        std::optional<WitnessRows> rows = oracle_search(q, db, options.max_oracle_cells);
        report.timings.emplace_back("evaluate", seconds_since(start));
        report.engines.emplace_back(member_name(q), "oracle");
        for (const auto& [label, rel] : db.relations) report.relation_sizes[label] = rel.rows.size();
        report.result = rows.has_value();
        if (rows) {
            require(check_witness(q, db, *rows), "oracle witness fails the query");
            report.witness = std::move(*rows);
            report.witness_checked = true;
        }
        return report;
    }

    auto start = std::chrono::steady_clock::now();
    ReductionTrace trace = reduce_full_traced(q, db);
    report.timings.emplace_back("reduce", seconds_since(start));
    for (const auto& [label, rel] : trace.output.database.relations)
        report.relation_sizes[label] = rel.rows.size();

    start = std::chrono::steady_clock::now();
    const std::vector<Query>& members = trace.output.queries;
    std::vector<MemberPlan> plans;
    plans.reserve(members.size());
    for (const Query& member : members)
        plans.push_back(plan_member(member, trace.output.database, options));
    report.timings.emplace_back("analyze", seconds_since(start));

    start = std::chrono::steady_clock::now();
    std::vector<char> evaluated(members.size(), 0);
    std::vector<std::optional<WitnessRows>> found(members.size());

    if (options.parallel && members.size() > 1) {
        std::atomic<std::size_t> next{0};
        std::atomic<bool> stop{false};
        std::mutex error_mu;
        std::exception_ptr error;
        auto work = [&] {
            while (!stop.load()) {
                std::size_t i = next.fetch_add(1);
                if (i >= members.size()) return;
                try {
                    std::optional<WitnessRows> rows =
                        run_member(members[i], trace.output.database, plans[i]);
                    evaluated[i] = 1;
                    if (rows) {
                        found[i] = std::move(rows);
                        stop.store(true);
                    }
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mu);
                    if (!error) error = std::current_exception();
                    stop.store(true);
                    return;
                }
            }
        };
        std::size_t workers = std::thread::hardware_concurrency();
        if (workers == 0) workers = 2;
        workers = std::min(workers, members.size());
        std::vector<std::thread> threads;
        threads.reserve(workers);
        for (std::size_t t = 0; t < workers; ++t) threads.emplace_back(work);
        for (std::thread& t : threads) t.join();
        if (error) std::rethrow_exception(error);
    } else {
        for (std::size_t i = 0; i < members.size(); ++i) {
            found[i] = run_member(members[i], trace.output.database, plans[i]);
            evaluated[i] = 1;
            if (found[i]) break;
        }
    }
    report.timings.emplace_back("evaluate", seconds_since(start));

    std::size_t winner = members.size();
    std::size_t evaluated_count = 0;
    for (std::size_t i = 0; i < members.size(); ++i) {
        if (evaluated[i]) {
            ++evaluated_count;
            report.engines.emplace_back(plans[i].name, engine_name(plans[i].kind));
        }
        if (found[i] && winner == members.size()) winner = i;
    }
    report.result = winner != members.size();
    report.early_exit = report.result && evaluated_count < members.size();

    if (report.result) {
        WitnessRows witness;
        for (const auto& [label, idx] : *found[winner]) {
            std::string base = ReducedRelationKey::parse(label).base;
            witness[base] = trace.provenance.at(label).at(idx);
        }
        require(witness.size() == q.atoms.size(), "witness misses an input atom");
        require(check_witness(q, db, witness), "reconstructed witness fails the query");
        report.witness = std::move(witness);
        report.witness_checked = true;
    }
    return report;
}

}  // namespace ijq
