#pragma once

#include "ijq/interval.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace ijq {

/**
 * Address of a segment-tree node: the root is the empty string, appending
 * '0' moves to the left child and '1' to the right. Leaves have exactly
 * `height` bits.
 */
struct NodeId {
    std::string bits;

    bool operator==(const NodeId&) const = default;
    auto operator<=>(const NodeId&) const = default;
};

/** True when a equals b or a lies on the path from the root to b. */
bool is_ancestor(const NodeId& a, const NodeId& b);

/** True when a is an ancestor of b and a != b. */
bool is_strict_ancestor(const NodeId& a, const NodeId& b);

using CanonicalPartition = std::vector<NodeId>;

/**
 * Balanced segment tree over the elementary segments induced by the
 * endpoints of a set of intervals. With sorted distinct endpoints
 * p1 < ... < pm the elementary segments are
 *
 *   (-inf,p1), [p1,p1], (p1,p2), [p2,p2], ..., [pm,pm], (pm,+inf)
 *
 * in left-to-right order, padded on the right with empty placeholder
 * segments up to the next power of two. Leaf k (counting from 0) carries
 * elementary segment k; an internal node carries the union of its leaves'
 * segments.
 */
struct SegmentTree {
    std::vector<Rational> endpoints;           // sorted, distinct
    std::vector<Interval> intervals;           // as passed to build()
    std::size_t leaves = 1;                    // power of two
    std::size_t height = 0;                    // bits in a leaf id
    std::vector<std::vector<std::size_t>> holders;  // heap-ordered: ids with the node in their canonical partition

    std::size_t segment_count() const { return endpoints.empty() ? 1 : 2 * endpoints.size() + 1; }
    std::size_t node_count() const { return 2 * leaves - 1; }
};

/** Builds the tree and stores every interval at its canonical partition nodes. */
SegmentTree build(const std::vector<Interval>& intervals);

/** Heap position of a node (root first, then level by level). */
std::size_t node_heap_index(const SegmentTree& tree, const NodeId& node);

/** All node ids of the tree, root first, level by level. */
std::vector<NodeId> all_nodes(const SegmentTree& tree);

/** True when the node's segment is a subset of the interval. */
bool node_covered_by(const SegmentTree& tree, const NodeId& node, const Interval& interval);

/** True when the node's segment meets the interval. */
bool node_intersects(const SegmentTree& tree, const NodeId& node, const Interval& interval);

/**
 * The canonical partition of an interval: the shallowest nodes whose
 * segments are contained in it. Throws UnknownInterval unless both
 * endpoints are endpoints of the tree.
 */
CanonicalPartition canonical_partition(const SegmentTree& tree, const Interval& interval);

/** Leaf whose elementary segment contains the point. */
NodeId leaf_of(const SegmentTree& tree, const Rational& point);

/**
 * Ids of the stored intervals containing the point, found by collecting
 * holders along the root-to-leaf path.
 */
std::vector<std::size_t> stab_query(const SegmentTree& tree, const Rational& point);

/** Rendering of the node's segment, e.g. "(-inf,1)", "[1,1]", "(1,4]". */
std::string segment_string(const SegmentTree& tree, const NodeId& node);

/** One line per node, level by level: bits, segment, held interval ids. */
std::string dump(const SegmentTree& tree);

}  // namespace ijq
