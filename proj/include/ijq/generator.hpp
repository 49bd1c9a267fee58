#pragma once

#include "ijq/query.hpp"
#include "ijq/relation.hpp"

#include <cstdint>

namespace ijq {

/**
 * Synthetic data shape. Interval cells are [l, l+w] with l drawn uniformly
 * from the grid {grid_min, grid_min + grid_step, ..., <= grid_max} and w
 * uniformly from [width_min, width_max]; point cells are uniform integers
 * in [point_min, point_max].
 */
struct GenSpec {
    std::size_t rows = 100;
    long long grid_min = 0;
    long long grid_max = 100;
    long long grid_step = 1;
    long long width_min = 1;
    long long width_max = 10;
    long long point_min = 0;
    long long point_max = 100;
};

/**
 * One relation per atom label, spec.rows tuples each, drawn in atom and
 * column order from a single generator, so output is a pure function of
 * (q, spec, seed). Throws Error on a degenerate spec (empty grid or range).
 */
Database gen_synthetic(const Query& q, const GenSpec& spec, std::uint64_t seed);

}  // namespace ijq
