#include "stormgrid/indices.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "stormgrid/csv.hpp"
#include "stormgrid/errors.hpp"
#include "stormgrid/util.hpp"

namespace stormgrid::indices {

std::vector<std::optional<double>> percentile_rank(
    const std::vector<std::optional<double>>& values) {
    std::vector<std::size_t> present;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i]) present.push_back(i);
    }
    if (present.empty()) {
        throw ValidationError("percentile_rank needs at least one non-null value");
    }

    std::vector<std::optional<double>> out(values.size());
    const std::size_t n = present.size();
    if (n == 1) {
        out[present[0]] = 0.5;
        return out;
    }

    std::vector<std::size_t> order = present;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return *values[a] < *values[b]; });

    // Average ordinal rank across each run of equal values.
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && *values[order[j + 1]] == *values[order[i]]) ++j;
        const double avg_rank = static_cast<double>(i + j) / 2.0 + 1.0; // 1-based
        const double r = (avg_rank - 1.0) / static_cast<double>(n - 1);
        for (std::size_t k = i; k <= j; ++k) out[order[k]] = r;
        i = j + 1;
    }
    return out;
}

std::vector<double> percentile_rank_dense(const std::vector<double>& values) {
    std::vector<std::optional<double>> boxed(values.begin(), values.end());
    const auto ranked = percentile_rank(boxed);
    std::vector<double> out;
    out.reserve(ranked.size());
    for (const auto& r : ranked) out.push_back(*r);
    return out;
}

std::vector<SviRecord> parse_svi(const std::string& path) {
    const csv::Table table =
        csv::read_file(path, {"county_fips", "s1", "s2", "s3", "s4"});
    std::vector<SviRecord> out;
    std::set<std::string> seen;
    for (const auto& row : table.rows) {
        const std::string where = path + ":" + std::to_string(row.line_number);
        SviRecord rec;
        rec.county_fips = row.fields[0];
        if (rec.county_fips.empty()) throw ParseError(where + ": empty county_fips");
        if (!seen.insert(rec.county_fips).second) {
            throw ValidationError(where + ": duplicate county " + rec.county_fips);
        }
        double* slots[4] = {&rec.s1, &rec.s2, &rec.s3, &rec.s4};
        for (int i = 0; i < 4; ++i) {
            auto v = parse_double(row.fields[static_cast<std::size_t>(i) + 1]);
            if (!v || !std::isfinite(*v)) {
                throw ParseError(where + ": bad theme value '" +
                                 row.fields[static_cast<std::size_t>(i) + 1] + "'");
            }
            if (*v < 0.0) {
                throw ValidationError(where + ": theme sums must be non-negative");
            }
            *slots[i] = *v;
        }
        out.push_back(std::move(rec));
    }
    return out;
}

CountyIndex ovi(const CountyIndex& expected_norm_loss) {
    std::vector<std::string> keys;
    std::vector<std::optional<double>> values;
    for (const auto& [fips, v] : expected_norm_loss) {
        keys.push_back(fips);
        values.push_back(v);
    }
    const auto ranked = percentile_rank(values);
    CountyIndex out;
    for (std::size_t i = 0; i < keys.size(); ++i) out.emplace(keys[i], ranked[i]);
    return out;
}

CountyIndex svi(const std::vector<SviRecord>& records) {
    if (records.empty()) throw ValidationError("no SVI records");
    std::vector<double> sums;
    sums.reserve(records.size());
    for (const auto& r : records) sums.push_back(r.theme_sum());
    const auto ranked = percentile_rank_dense(sums);
    CountyIndex out;
    for (std::size_t i = 0; i < records.size(); ++i) {
        out.emplace(records[i].county_fips, ranked[i]);
    }
    return out;
}

namespace {

// (v - min)/(max - min); all zero when the values do not spread.
std::vector<double> minmax_normalize(const std::vector<double>& v) {
    const auto [lo_it, hi_it] = std::minmax_element(v.begin(), v.end());
    const double lo = *lo_it, hi = *hi_it;
    std::vector<double> out(v.size(), 0.0);
    if (hi > lo) {
        for (std::size_t i = 0; i < v.size(); ++i) out[i] = (v[i] - lo) / (hi - lo);
    }
    return out;
}

} // namespace

CountyIndex icvi(const std::vector<SviRecord>& records,
                 const CountyIndex& expected_norm_loss) {
    std::map<std::string, double> sums;
    for (const auto& r : records) sums.emplace(r.county_fips, r.theme_sum());

    std::vector<std::string> common;
    for (const auto& [fips, loss] : expected_norm_loss) {
        if (loss && sums.count(fips)) common.push_back(fips);
    }
    if (common.empty()) {
        throw ValidationError("social vulnerability and outage loss cover disjoint county sets");
    }

    std::vector<double> sum_vals, loss_vals;
    for (const auto& fips : common) {
        sum_vals.push_back(sums.at(fips));
        loss_vals.push_back(*expected_norm_loss.at(fips));
    }
    const auto norm_sum = minmax_normalize(sum_vals);
    const auto norm_loss = minmax_normalize(loss_vals);
    std::vector<double> combined(common.size());
    for (std::size_t i = 0; i < common.size(); ++i) combined[i] = norm_sum[i] + norm_loss[i];
    const auto ranked = percentile_rank_dense(combined);

    CountyIndex out;
    for (const auto& [fips, loss] : expected_norm_loss) out.emplace(fips, std::nullopt);
    for (const auto& [fips, sum] : sums) out.emplace(fips, std::nullopt);
    for (std::size_t i = 0; i < common.size(); ++i) out[common[i]] = ranked[i];
    return out;
}

} // namespace stormgrid::indices
