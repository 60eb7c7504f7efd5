#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace stormgrid::indices {

// Percentile rank (rank - 1) / (N - 1) with average ranks for ties; a
// single value ranks 0.5; null entries pass through and stay out of the
// denominator.
std::vector<std::optional<double>> percentile_rank(
    const std::vector<std::optional<double>>& values);

std::vector<double> percentile_rank_dense(const std::vector<double>& values);

// County theme sums from the social-vulnerability file.
struct SviRecord {
    std::string county_fips;
    double s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;

    double theme_sum() const { return s1 + s2 + s3 + s4; }
};

// SVI CSV: county_fips,s1,s2,s3,s4
std::vector<SviRecord> parse_svi(const std::string& path);

using CountyIndex = std::map<std::string, std::optional<double>>;

// Percentile rank of expected normalized county loss; null losses stay null.
CountyIndex ovi(const CountyIndex& expected_norm_loss);

// Percentile rank of the four-theme sum.
CountyIndex svi(const std::vector<SviRecord>& records);

// Percentile rank of min-max-normalized theme sum plus min-max-normalized
// loss, over the counties having both. Degenerate min-max (all equal) maps
// to 0 for every county. Counties missing either input come back null.
CountyIndex icvi(const std::vector<SviRecord>& records,
                 const CountyIndex& expected_norm_loss);

// Percentile ranks of per-component raw statistics (branch or substation
// failure probabilities).
template <typename Key>
std::map<Key, double> rank_components(const std::map<Key, double>& raw) {
    std::vector<double> values;
    values.reserve(raw.size());
    for (const auto& [key, v] : raw) values.push_back(v);
    const std::vector<double> ranks = percentile_rank_dense(values);
    std::map<Key, double> out;
    std::size_t i = 0;
    for (const auto& [key, v] : raw) out.emplace(key, ranks[i++]);
    return out;
}

} // namespace stormgrid::indices
