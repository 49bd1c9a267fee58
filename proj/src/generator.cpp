#include "ijq/generator.hpp"

#include "ijq/errors.hpp"

#include <random>

namespace ijq {

namespace {

/** Uniform draw from {lo, lo + step, ..., <= hi}. Modulo bias is irrelevant
 *  here and taking the remainder keeps the stream identical across standard
 *  library implementations, unlike uniform_int_distribution. */
long long draw(std::mt19937_64& rng, long long lo, long long hi, long long step = 1) {
    unsigned long long count =
        static_cast<unsigned long long>((hi - lo) / step) + 1;
    return lo + step * static_cast<long long>(rng() % count);
}

}  // namespace

Database gen_synthetic(const Query& q, const GenSpec& spec, std::uint64_t seed) {
    check_well_formed(q);
    if (spec.grid_step <= 0 || spec.grid_max < spec.grid_min)
        throw Error("generator grid is empty");
    if (spec.width_max < spec.width_min || spec.width_min < 0)
        throw Error("generator width range is empty or negative");
    if (spec.point_max < spec.point_min) throw Error("generator point range is empty");

    std::mt19937_64 rng(seed);
    Database db;
    for (const Atom& atom : q.atoms) {
        Relation rel;
        rel.label = atom.label;
        rel.schema = atom.schema;
        rel.rows.reserve(spec.rows);
        for (std::size_t r = 0; r < spec.rows; ++r) {
            Tuple tuple;
            tuple.reserve(atom.schema.size());
            for (const Variable& v : atom.schema) {
                if (v.kind == VarKind::Interval) {
                    long long l = draw(rng, spec.grid_min, spec.grid_max, spec.grid_step);
                    long long w = draw(rng, spec.width_min, spec.width_max);
                    tuple.push_back(Interval{Rational(l), Rational(l + w)});
                } else {
                    tuple.push_back(Rational(draw(rng, spec.point_min, spec.point_max)));
                }
            }
            rel.rows.push_back(std::move(tuple));
        }
        db.relations.emplace(rel.label, std::move(rel));
    }
    return db;
}

}  // namespace ijq
