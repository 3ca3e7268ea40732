#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "depfid/matrix.hpp"

namespace depfid {

/// Parses comma-separated decimal numbers. LF and CRLF line endings are
/// accepted; trailing blank lines are ignored. Error coordinates are 1-based
/// file line and field numbers.
DataMatrix parse_csv(std::string_view text, bool has_header);

DataMatrix ingest_csv(const std::filesystem::path& path, bool has_header);

/// Shortest decimal form that round-trips the double exactly.
std::string format_csv_number(double value);

/// Writes LF-terminated rows; the header line is omitted when `header` is empty.
void write_csv(const std::filesystem::path& path, const Matrix& values,
               const std::vector<std::string>& header = {});

} // namespace depfid
