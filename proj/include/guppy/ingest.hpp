#ifndef GUPPY_INGEST_HPP
#define GUPPY_INGEST_HPP

#include <string>

#include "guppy/types.hpp"

namespace guppy {

enum class TableFormat { csv, json };

// Default column-sum tolerance for externally supplied tables; published
// 3-decimal data can be off by one unit in the last place per row.
inline constexpr double default_column_tolerance = 1e-3;

// Parses a probability table.
//
// csv: header "exemplar,mu_a,mu_b,mu_ab"; field separator ';' or ','
// (auto-detected from the header); decimal commas in numeric fields are
// normalized to points, so ';'-separated rows may mix "0.026" and "0,118".
//
// json: array of objects with keys exemplar, mu_a, mu_b, mu_ab; numeric
// values may be numbers or comma-decimal strings.
//
// Throws Error(parse_error) on malformed input and
// Error(validation_error) when values leave [0,1] or a column sum
// deviates from 1 by more than column_tol.
ProbabilityTable parse_table(const std::string& text, TableFormat format,
                             double column_tol = default_column_tolerance);

// Parses per-participant typicality ratings from csv with header
// "participant,concept,exemplar,rating", concept in {A, B, AB}.
// Every (participant, concept, exemplar) combination must appear exactly
// once and ratings must lie in [-3, +3].
RawTypicalityTable parse_raw_typicality_csv(const std::string& text);

// Shifts every rating by +3, mapping [-3, +3] onto [0, 6].
RawTypicalityTable rescale_typicality(const RawTypicalityTable& raw);

// Divides each participant's ratings by that participant's per-concept sum,
// then averages over participants. Output columns sum to 1 within 1e-12.
// Throws Error(degenerate_participant) when a participant rated every
// exemplar 0 for some concept, Error(validation_error) on negative input
// (callers rescale first).
ProbabilityTable normalize_and_aggregate(const RawTypicalityTable& raw);

// Serializes with shortest round-trip number formatting, so
// parse(serialize(t)) reproduces t bit-exactly. decimal_comma selects
// ';'-separated output with ',' as the decimal mark.
std::string table_to_csv(const ProbabilityTable& table, bool decimal_comma = false);
std::string table_to_json(const ProbabilityTable& table);

} // namespace guppy

#endif
