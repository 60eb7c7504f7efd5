#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace stormgrid::util {

std::string trim(std::string_view s);

// Strict numeric parsing: the whole (trimmed) field must be consumed.
std::optional<double> parse_double(std::string_view s);
std::optional<long long> parse_int(std::string_view s);

// Shortest round-trip decimal form of v. All CSV/report output goes through
// this so identical doubles always serialize to identical bytes.
std::string format_double(double v);

// "YYYY-MM-DDTHH:MM:SS" with optional trailing 'Z', interpreted as UTC.
std::optional<std::int64_t> parse_iso8601_utc(std::string_view s);
std::string format_iso8601_utc(std::int64_t epoch_seconds);

// FNV-1a 64-bit, used as the run-manifest config fingerprint.
std::uint64_t fnv1a64(std::string_view data);
std::string to_hex(std::uint64_t v);

// Accumulates non-fatal diagnostics during parsing/validation.
class WarningLog {
public:
    void add(std::string message) { messages_.push_back(std::move(message)); }
    const std::vector<std::string>& messages() const { return messages_; }
    bool empty() const { return messages_.empty(); }

private:
    std::vector<std::string> messages_;
};

} // namespace stormgrid::util

namespace stormgrid {
using util::fnv1a64;
using util::format_double;
using util::format_iso8601_utc;
using util::parse_double;
using util::parse_int;
using util::parse_iso8601_utc;
using util::to_hex;
using util::trim;
using util::WarningLog;
} // namespace stormgrid
