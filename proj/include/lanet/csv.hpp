#pragma once

#include <istream>
#include <optional>
#include <string>
#include <vector>

namespace lanet::csv {

/// One record of an RFC-4180 CSV stream. Handles quoted fields, doubled
/// quotes, embedded commas and newlines, and CRLF line endings. Returns
/// nullopt at end of input. A trailing newline does not produce an empty
/// record.
std::optional<std::vector<std::string>> read_record(std::istream& in);

/// Read every record. Strips a UTF-8 BOM if present on the first field.
std::vector<std::vector<std::string>> read_all(std::istream& in);

/// Quote a field if it contains a comma, quote, or newline.
std::string escape_field(const std::string& field);

std::string format_record(const std::vector<std::string>& fields);

}  // namespace lanet::csv
