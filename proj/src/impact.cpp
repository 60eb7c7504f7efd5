#include "stormgrid/impact.hpp"

#include <algorithm>
#include <set>

#include "stormgrid/errors.hpp"

namespace stormgrid::impact {

CountyAggregator CountyAggregator::build(const grid::GridCase& c) {
    std::map<std::string, std::string> zip_city;
    std::map<std::string, std::map<std::string, double>> city_shares;
    for (const auto& row : c.county_map) {
        zip_city.emplace(row.zip, row.city);
        city_shares[row.city].emplace(row.county_fips, row.population_share);
    }

    CountyAggregator agg;
    std::set<std::string> seen;
    for (const auto& bus : c.buses) {
        auto zit = zip_city.find(bus.zip);
        if (zit == zip_city.end()) {
            throw ValidationError("bus " + std::to_string(bus.id) + " zip " + bus.zip +
                                  " is not in the county map");
        }
        auto& weights = agg.bus_weights_[bus.id];
        for (const auto& [fips, share] : city_shares.at(zit->second)) {
            weights.emplace_back(fips, share);
            seen.insert(fips);
        }
    }
    agg.counties_.assign(seen.begin(), seen.end());
    return agg;
}

std::map<std::string, double> CountyAggregator::aggregate(
    const std::map<int, double>& per_bus_mw) const {
    std::map<std::string, double> out;
    for (const auto& fips : counties_) out.emplace(fips, 0.0);
    for (const auto& [bus_id, value] : per_bus_mw) {
        auto it = bus_weights_.find(bus_id);
        if (it == bus_weights_.end()) {
            throw NotFoundError("bus " + std::to_string(bus_id) + " has no county weights");
        }
        for (const auto& [fips, share] : it->second) out[fips] += value * share;
    }
    return out;
}

std::map<std::string, double> county_demand(const grid::GridCase& c) {
    const CountyAggregator agg = CountyAggregator::build(c);
    std::map<int, double> loads;
    for (const auto& bus : c.buses) loads[bus.id] = bus.load_mw;
    return agg.aggregate(loads);
}

std::vector<std::map<std::string, double>> county_loss_timeseries(
    const std::vector<powerflow::DispatchResult>& steps, const CountyAggregator& agg) {
    std::vector<std::map<std::string, double>> out;
    out.reserve(steps.size());
    for (const auto& step : steps) {
        std::map<int, double> shed;
        for (const auto& [bus_id, d] : step.per_bus) shed[bus_id] = d.shed_load_mw;
        out.push_back(agg.aggregate(shed));
    }
    return out;
}

std::map<std::string, double> county_peak_loss(
    const std::vector<std::map<std::string, double>>& series) {
    if (series.empty()) throw ValidationError("county loss series is empty");
    std::map<std::string, double> out;
    for (const auto& step : series) {
        for (const auto& [fips, loss] : step) {
            auto [it, inserted] = out.emplace(fips, loss);
            if (!inserted) it->second = std::max(it->second, loss);
        }
    }
    return out;
}

std::map<std::string, std::optional<double>> expected_normalized_loss(
    const std::vector<std::map<std::string, double>>& per_storm_mean_peak_mw,
    const std::map<std::string, double>& demand_mw) {
    if (per_storm_mean_peak_mw.empty()) {
        throw ValidationError("expected loss needs at least one storm");
    }
    std::map<std::string, std::optional<double>> out;
    for (const auto& [fips, demand] : demand_mw) {
        if (!(demand > 0.0)) {
            out.emplace(fips, std::nullopt);
            continue;
        }
        double sum = 0.0;
        for (const auto& storm : per_storm_mean_peak_mw) {
            auto it = storm.find(fips);
            if (it != storm.end()) sum += it->second / demand;
        }
        double mean = sum / static_cast<double>(per_storm_mean_peak_mw.size());
        out.emplace(fips, std::min(1.0, mean));
    }
    return out;
}

} // namespace stormgrid::impact
