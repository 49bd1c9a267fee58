#pragma once

#include "ijq/relation.hpp"

#include <filesystem>
#include <string>

namespace ijq {

/**
 * Load a database. A directory is read as one <label>.csv per relation; a
 * file is read as the JSON form. CSV: first row is the schema ([A] marks an
 * interval variable), cells are comma-separated with the interval forms
 * [l,r], (l,r), [l,r) and (l,r] carrying their single interior comma, and
 * numbers are exact decimal or p/q strings. Open endpoints are closed by
 * the epsilon rule: a quarter of the smallest gap between distinct endpoint
 * values in the database, divided by the interval count plus one.
 *
 * JSON: {"relations": {label: {"schema": [...], "rows": [[...]]}}} with the
 * same schema tokens; a cell is a number (integer), a string containing
 * "/" or "." or a sign (exact rational), a string of 0s and 1s (bitstring,
 * "" for the empty string), or an interval string as in CSV.
 */
Database load_database(const std::filesystem::path& path);

/**
 * Save a database. A path ending in ".json" gets the JSON form; any other
 * path is created as a directory of <label>.csv files. The written form is
 * canonical: loading and saving it again reproduces it byte for byte.
 * Bitstring cells, having no CSV syntax, require the JSON form (IoError
 * otherwise). Integer cells beyond 64 bits are written as "p/q" strings so
 * they stay distinguishable from bitstrings.
 */
void save_database(const Database& db, const std::filesystem::path& path);

/** 64-bit FNV-1a of a byte string, as 16 hex digits. Used in run reports. */
std::string digest(std::string_view bytes);

/** Digest of a database path: file bytes, or for a directory every
 *  <name>.csv as name plus contents in filename order. */
std::string digest_path(const std::filesystem::path& path);

}  // namespace ijq
