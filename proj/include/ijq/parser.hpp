#pragma once

#include "ijq/query.hpp"

#include <string>
#include <string_view>

namespace ijq {

/**
 * Parse query text. Grammar:
 *
 *   query := atom ("," atom)*
 *   atom  := NAME "(" var ("," var)* ")"
 *   var   := NAME | "[" NAME "]"
 *   NAME  := [A-Za-z][A-Za-z0-9_]*
 *
 * Whitespace between tokens is insignificant. Brackets mark interval
 * variables. A relation name used by several atoms yields labels R#1, R#2,
 * ... in atom order. Throws SyntaxError with line and column; structural
 * problems (repeated variable in an atom, one name used with both kinds)
 * surface as DuplicateVariableInAtom / Error.
 */
Query parse_query(std::string_view text);

/** Inverse rendering: "R([A],B), S(B)". Reduced relation labels pass
 *  through verbatim, so output is only re-parseable for plain names. */
std::string format_query(const Query& q);

}  // namespace ijq
