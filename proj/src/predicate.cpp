#include "ijq/predicate.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>

namespace ijq {

namespace {

std::vector<NodeId> root_to_leaf_path(const NodeId& leaf) {
    std::vector<NodeId> path;
    for (std::size_t len = 0; len <= leaf.bits.size(); ++len)
        path.push_back(NodeId{leaf.bits.substr(0, len)});
    return path;
}

std::vector<std::string> decompose(const std::vector<NodeId>& nodes) {
    std::vector<std::string> parts;
    std::string previous;
    for (const NodeId& node : nodes) {
        parts.push_back(node.bits.substr(previous.size()));
        previous = node.bits;
    }
    return parts;
}

// The single node of the canonical partition lying on the root-to-leaf
// path, if any. The partition is an antichain and the path is a chain, so
// two distinct hits are impossible.
std::optional<NodeId> partition_hit(const CanonicalPartition& partition, const NodeId& leaf) {
    std::optional<NodeId> hit;
    for (const NodeId& v : partition) {
        if (is_ancestor(v, leaf)) {
            assert(!hit);
            hit = v;
        }
    }
    return hit;
}

}  // namespace

bool check_direct(const std::vector<Interval>& s) {
    return intersect_all(s).has_value();
}

bool check_rewriting1(const std::vector<Interval>& s, const SegmentTree& t) {
    for (std::size_t i = 0; i < s.size(); ++i) {
        NodeId leaf = leaf_of(t, s[i].l);
        bool all = true;
        for (std::size_t j = 0; j < s.size() && all; ++j) {
            if (j == i) continue;
            all = partition_hit(canonical_partition(t, s[j]), leaf).has_value();
        }
        if (all) return true;
    }
    return false;
}

std::optional<PredicateWitness> check_rewriting2(const std::vector<Interval>& s,
                                                 const SegmentTree& t) {
    std::size_t k = s.size();
    std::vector<CanonicalPartition> partitions;
    for (const Interval& x : s) partitions.push_back(canonical_partition(t, x));

    std::vector<std::size_t> sigma(k);
    std::iota(sigma.begin(), sigma.end(), 0);
    do {
        NodeId leaf = leaf_of(t, s[sigma.back()].l);
        std::vector<NodeId> nodes;
        bool ok = true;
        for (std::size_t j = 0; j + 1 < k && ok; ++j) {
            std::optional<NodeId> hit = partition_hit(partitions[sigma[j]], leaf);
            if (!hit) {
                ok = false;
            } else {
                nodes.push_back(*hit);
            }
        }
        if (!ok) continue;
        nodes.push_back(leaf);
        for (std::size_t j = 0; j + 1 < nodes.size() && ok; ++j)
            ok = is_ancestor(nodes[j], nodes[j + 1]);
        if (!ok) continue;
        return PredicateWitness{sigma, nodes, decompose(nodes)};
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return std::nullopt;
}

std::optional<PredicateWitness> check_rewriting3(const std::vector<Interval>& s,
                                                 const SegmentTree& t) {
    std::size_t k = s.size();
    std::vector<CanonicalPartition> partitions;
    for (const Interval& x : s) partitions.push_back(canonical_partition(t, x));

    std::vector<std::size_t> sigma(k);
    std::iota(sigma.begin(), sigma.end(), 0);
    do {
        NodeId leaf = leaf_of(t, s[sigma.back()].l);
        // Prefix lengths of the leaf bits give the candidate nodes; pick a
        // non-decreasing sequence of k-1 of them, one per earlier interval.
        std::vector<std::size_t> lengths(k == 0 ? 0 : k - 1, 0);
        auto search = [&](auto&& self, std::size_t j, std::size_t from) -> bool {
            if (j + 1 >= k) return true;
            for (std::size_t len = from; len <= leaf.bits.size(); ++len) {
                NodeId u{leaf.bits.substr(0, len)};
                const CanonicalPartition& p = partitions[sigma[j]];
                if (std::find(p.begin(), p.end(), u) == p.end()) continue;
                lengths[j] = len;
                if (self(self, j + 1, len)) return true;
            }
            return false;
        };
        if (!search(search, 0, 0)) continue;
        std::vector<NodeId> nodes;
        for (std::size_t j = 0; j + 1 < k; ++j) nodes.push_back(NodeId{leaf.bits.substr(0, lengths[j])});
        nodes.push_back(leaf);
        return PredicateWitness{sigma, nodes, decompose(nodes)};
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return std::nullopt;
}

std::vector<PredicateWitness> check_disjoint(const std::vector<Interval>& s,
                                             const SegmentTree& t) {
    std::size_t k = s.size();
    std::vector<CanonicalPartition> partitions;
    for (const Interval& x : s) partitions.push_back(canonical_partition(t, x));

    std::vector<PredicateWitness> witnesses;
    std::vector<std::size_t> sigma(k);
    std::iota(sigma.begin(), sigma.end(), 0);
    do {
        NodeId leaf = leaf_of(t, s[sigma.back()].l);
        std::vector<NodeId> nodes;
        bool ok = true;
        for (std::size_t j = 0; j + 1 < k && ok; ++j) {
            std::optional<NodeId> hit = partition_hit(partitions[sigma[j]], leaf);
            if (!hit) {
                ok = false;
            } else {
                nodes.push_back(*hit);
            }
        }
        if (!ok) continue;
        nodes.push_back(leaf);
        // Ancestor-ordered with ties broken by position: equal neighbours
        // are allowed only when the permutation lists them increasingly.
        for (std::size_t j = 1; j + 1 < k && ok; ++j) {
            ok = sigma[j - 1] < sigma[j] ? is_ancestor(nodes[j - 1], nodes[j])
                                         : is_strict_ancestor(nodes[j - 1], nodes[j]);
        }
        if (ok && k >= 2) ok = is_ancestor(nodes[k - 2], nodes[k - 1]);
        if (!ok) continue;
        witnesses.push_back(PredicateWitness{sigma, nodes, decompose(nodes)});
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return witnesses;
}

Rational perturbation_epsilon(const Database& db, std::size_t atom_count) {
    std::vector<Rational> points;
    std::size_t intervals = 0;
    for (const auto& [label, rel] : db.relations) {
        for (const Tuple& row : rel.rows) {
            for (const Value& cell : row) {
                if (const Interval* i = std::get_if<Interval>(&cell)) {
                    points.push_back(i->l);
                    points.push_back(i->r);
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
    std::size_t scale = std::max(intervals, atom_count);
    return gap / (4 * (Rational(scale) + 1));
}

Database perturb_left_endpoints(const Database& db, const Query& q) {
    std::size_t n = q.atoms.size();
    Rational eps = perturbation_epsilon(db, n);
    Database out = db;
    for (std::size_t a = 0; a < n; ++a) {
        auto it = out.relations.find(q.atoms[a].label);
        if (it == out.relations.end()) continue;
        Rational left_shift = Rational(a + 1) * eps;
        Rational right_shift = Rational(n) * eps;
        for (Tuple& row : it->second.rows) {
            for (Value& cell : row) {
                if (Interval* i = std::get_if<Interval>(&cell))
                    *i = Interval{i->l + left_shift, i->r + right_shift};
            }
        }
    }
    return out;
}

}  // namespace ijq
