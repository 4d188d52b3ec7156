#pragma once

#include <string>

#include "hesvs/gridscan.hpp"

namespace hesvs::io {

// RFC 4180 CSV: header row, shortest round-trip decimals, nulls as empty
// fields.  Metadata is not embedded (CSV has no comment syntax).
std::string to_csv(const gridscan::Table& table);

// {"metadata": {...}, "columns": [...], "rows": [[...], ...]} with nulls as
// JSON null; the metadata object carries full parameter provenance.
std::string to_json(const gridscan::Table& table);

// Quote a single CSV field per RFC 4180.
std::string csv_quote(const std::string& field);

// Shortest decimal that round-trips to the same double.
std::string format_shortest(double v);

// Write via a temporary file in the same directory plus rename.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace hesvs::io
