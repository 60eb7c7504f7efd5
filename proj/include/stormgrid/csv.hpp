#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace stormgrid::csv {

struct Row {
    size_t line_number = 0; // 1-based, header is line 1
    std::vector<std::string> fields;
};

struct Table {
    std::vector<std::string> header;
    std::vector<Row> rows;
};

// Reads a comma-separated file with a mandatory header row. Fields are
// trimmed; blank lines are skipped; no quoting (fields must not contain
// commas). Throws ParseError on I/O failure, a missing header, or any row
// whose field count differs from the header's.
Table read_file(const std::filesystem::path& path);

// Requires the header to match `expected` exactly (case-sensitive).
Table read_file(const std::filesystem::path& path, const std::vector<std::string>& expected);

std::vector<std::string> split_line(const std::string& line);

// Joins fields with commas and writes one line; numeric callers pre-format
// through util::format_double so output bytes are reproducible.
std::string join(const std::vector<std::string>& fields);

} // namespace stormgrid::csv
