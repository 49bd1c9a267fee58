#include "ijq/segment_tree.hpp"

#include "ijq/errors.hpp"

#include <algorithm>
#include <cassert>

namespace ijq {

bool is_ancestor(const NodeId& a, const NodeId& b) {
    return a.bits.size() <= b.bits.size() &&
           b.bits.compare(0, a.bits.size(), a.bits) == 0;
}

bool is_strict_ancestor(const NodeId& a, const NodeId& b) {
    return a.bits.size() < b.bits.size() && is_ancestor(a, b);
}

namespace {

std::size_t node_value(const NodeId& node) {
    std::size_t v = 0;
    for (char c : node.bits) v = v * 2 + static_cast<std::size_t>(c - '0');
    return v;
}

NodeId leaf_id(const SegmentTree& tree, std::size_t leaf) {
    NodeId node;
    for (std::size_t d = 0; d < tree.height; ++d)
        node.bits.push_back((leaf >> (tree.height - 1 - d)) & 1 ? '1' : '0');
    return node;
}

// Inclusive range of leaf positions under a node.
std::pair<std::size_t, std::size_t> leaf_span(const SegmentTree& tree, const NodeId& node) {
    std::size_t width = tree.leaves >> node.bits.size();
    std::size_t first = node_value(node) * width;
    return {first, first + width - 1};
}

// Containment and overlap of one elementary segment against a closed interval.
// Placeholder padding and the unbounded rays are contained in nothing.
bool segment_covered(const SegmentTree& tree, std::size_t k, const Interval& i) {
    std::size_t m = tree.endpoints.size();
    if (m == 0 || k == 0 || k >= 2 * m) return false;
    if (k % 2 == 1) return i.contains(tree.endpoints[k / 2]);
    return i.l <= tree.endpoints[k / 2 - 1] && tree.endpoints[k / 2] <= i.r;
}

bool segment_intersects(const SegmentTree& tree, std::size_t k, const Interval& i) {
    std::size_t m = tree.endpoints.size();
    if (m == 0) return k == 0;
    if (k > 2 * m) return false;
    if (k == 0) return i.l < tree.endpoints.front();
    if (k == 2 * m) return i.r > tree.endpoints.back();
    if (k % 2 == 1) return i.contains(tree.endpoints[k / 2]);
    return tree.endpoints[k / 2 - 1] < i.r && i.l < tree.endpoints[k / 2];
}

}  // namespace

SegmentTree build(const std::vector<Interval>& intervals) {
    SegmentTree tree;
    tree.intervals = intervals;
    for (const Interval& i : intervals) {
        tree.endpoints.push_back(i.l);
        tree.endpoints.push_back(i.r);
    }
    std::sort(tree.endpoints.begin(), tree.endpoints.end());
    tree.endpoints.erase(std::unique(tree.endpoints.begin(), tree.endpoints.end()),
                         tree.endpoints.end());

    tree.leaves = 1;
    tree.height = 0;
    while (tree.leaves < tree.segment_count()) {
        tree.leaves *= 2;
        ++tree.height;
    }
    tree.holders.assign(tree.node_count(), {});

    for (std::size_t id = 0; id < intervals.size(); ++id) {
        auto insert = [&](auto&& self, const NodeId& node) -> void {
            if (!node_intersects(tree, node, intervals[id])) return;
            if (node_covered_by(tree, node, intervals[id])) {
                tree.holders[node_heap_index(tree, node)].push_back(id);
                return;
            }
            // A leaf that meets the interval without being contained would
            // straddle one of its endpoints, impossible on the endpoint grid.
            assert(node.bits.size() < tree.height);
            self(self, NodeId{node.bits + '0'});
            self(self, NodeId{node.bits + '1'});
        };
        insert(insert, NodeId{});
    }
    return tree;
}

std::size_t node_heap_index(const SegmentTree& tree, const NodeId& node) {
    (void)tree;
    return ((std::size_t{1} << node.bits.size()) - 1) + node_value(node);
}

std::vector<NodeId> all_nodes(const SegmentTree& tree) {
    std::vector<NodeId> nodes;
    nodes.reserve(tree.node_count());
    nodes.push_back(NodeId{});
    for (std::size_t at = 0; nodes[at].bits.size() < tree.height; ++at) {
        nodes.push_back(NodeId{nodes[at].bits + '0'});
        nodes.push_back(NodeId{nodes[at].bits + '1'});
    }
    std::sort(nodes.begin(), nodes.end(), [](const NodeId& a, const NodeId& b) {
        return std::pair(a.bits.size(), a.bits) < std::pair(b.bits.size(), b.bits);
    });
    return nodes;
}

bool node_covered_by(const SegmentTree& tree, const NodeId& node, const Interval& interval) {
    auto [lo, hi] = leaf_span(tree, node);
    bool populated = false;
    for (std::size_t k = lo; k <= hi; ++k) {
        if (k >= tree.segment_count()) break;
        populated = true;
        if (!segment_covered(tree, k, interval)) return false;
    }
    return populated;
}

bool node_intersects(const SegmentTree& tree, const NodeId& node, const Interval& interval) {
    auto [lo, hi] = leaf_span(tree, node);
    for (std::size_t k = lo; k <= hi; ++k) {
        if (segment_intersects(tree, k, interval)) return true;
    }
    return false;
}

CanonicalPartition canonical_partition(const SegmentTree& tree, const Interval& interval) {
    for (const Rational& p : {interval.l, interval.r}) {
        if (!std::binary_search(tree.endpoints.begin(), tree.endpoints.end(), p))
            throw UnknownInterval("endpoint " + format_rational(p) +
                                  " is not an endpoint of the tree");
    }
    CanonicalPartition partition;
    auto descend = [&](auto&& self, const NodeId& node) -> void {
        if (!node_intersects(tree, node, interval)) return;
        if (node_covered_by(tree, node, interval)) {
            partition.push_back(node);
            return;
        }
        if (node.bits.size() == tree.height) return;
        self(self, NodeId{node.bits + '0'});
        self(self, NodeId{node.bits + '1'});
    };
    descend(descend, NodeId{});
    return partition;
}

NodeId leaf_of(const SegmentTree& tree, const Rational& point) {
    const auto& ps = tree.endpoints;
    auto it = std::lower_bound(ps.begin(), ps.end(), point);
    std::size_t below = static_cast<std::size_t>(it - ps.begin());
    std::size_t leaf;
    if (it != ps.end() && *it == point) {
        leaf = 2 * below + 1;
    } else {
        leaf = 2 * below;
    }
    return leaf_id(tree, leaf);
}

std::vector<std::size_t> stab_query(const SegmentTree& tree, const Rational& point) {
    NodeId leaf = leaf_of(tree, point);
    std::vector<std::size_t> ids;
    for (std::size_t depth = 0; depth <= leaf.bits.size(); ++depth) {
        NodeId node{leaf.bits.substr(0, depth)};
        const auto& held = tree.holders[node_heap_index(tree, node)];
        ids.insert(ids.end(), held.begin(), held.end());
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

std::string segment_string(const SegmentTree& tree, const NodeId& node) {
    auto [lo, hi] = leaf_span(tree, node);
    if (lo >= tree.segment_count()) return "empty";
    hi = std::min(hi, tree.segment_count() - 1);
    std::size_t m = tree.endpoints.size();
    std::string out;
    if (m == 0 || lo == 0) {
        out += "(-inf";
    } else if (lo % 2 == 1) {
        out += "[" + format_rational(tree.endpoints[lo / 2]);
    } else {
        out += "(" + format_rational(tree.endpoints[lo / 2 - 1]);
    }
    out += ",";
    if (m == 0 || hi == 2 * m) {
        out += "+inf)";
    } else if (hi % 2 == 1) {
        out += format_rational(tree.endpoints[hi / 2]) + "]";
    } else {
        out += format_rational(tree.endpoints[hi / 2]) + ")";
    }
    return out;
}

std::string dump(const SegmentTree& tree) {
    std::string out;
    for (const NodeId& node : all_nodes(tree)) {
        out += node.bits.empty() ? "e" : node.bits;
        out += " " + segment_string(tree, node) + " {";
        const auto& held = tree.holders[node_heap_index(tree, node)];
        for (std::size_t i = 0; i < held.size(); ++i) {
            if (i) out += ",";
            out += format_interval(tree.intervals[held[i]]);
        }
        out += "}\n";
    }
    return out;
}

}  // namespace ijq
