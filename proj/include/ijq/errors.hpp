#pragma once

#include <stdexcept>
#include <string>

namespace ijq {

/** Base class of every error thrown by this library. */
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/** Query text does not match the grammar. Message carries line/column. */
struct SyntaxError : Error {
    using Error::Error;
};

/** An atom lists the same variable twice. */
struct DuplicateVariableInAtom : Error {
    using Error::Error;
};

/** The database has no relation for an atom label. */
struct MissingRelation : Error {
    using Error::Error;
};

/** Relation schema length does not match the atom. */
struct ArityMismatch : Error {
    using Error::Error;
};

/** Cell or column kind does not match the variable kind. */
struct KindMismatch : Error {
    using Error::Error;
};

/** Input exceeds a documented enumeration cap. */
struct SizeLimitExceeded : Error {
    using Error::Error;
};

/** Interval endpoints are absent from a segment tree's endpoint grid. */
struct UnknownInterval : Error {
    using Error::Error;
};

/** A reduction step was asked to resolve a non-interval variable. */
struct NotIntervalVariable : Error {
    using Error::Error;
};

/** Operation requires an alpha-acyclic query/hypergraph. */
struct NotAcyclic : Error {
    using Error::Error;
};

/** Tree decomposition fails its structural properties for the hypergraph. */
struct InvalidDecomposition : Error {
    using Error::Error;
};

/** A vertex of the cover target set touches no edge. */
struct UncoverableVertex : Error {
    using Error::Error;
};

/** Backward transformation refuses queries with repeated relation names. */
struct SelfJoinUnsupported : Error {
    using Error::Error;
};

/** Backward transformation requires one uniform bitstring cell length. */
struct MixedBitstringLengths : Error {
    using Error::Error;
};

/** No Berge cycle of the requested length exists in the target. */
struct NoBergeCycle : Error {
    using Error::Error;
};

/** Product of relation sizes exceeds the oracle cap. */
struct TooLargeForOracle : Error {
    using Error::Error;
};

/** Malformed database file or cell. */
struct ParseError : Error {
    using Error::Error;
};

/** File system failure while loading or saving. */
struct IoError : Error {
    using Error::Error;
};

}  // namespace ijq
