#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stormgrid/grid.hpp"
#include "stormgrid/powerflow.hpp"

namespace stormgrid::impact {

// Precomputed bus -> county weights along zip -> city -> county, with
// multi-county cities split by population share. Weights for one bus sum
// to 1, so every aggregation conserves totals.
class CountyAggregator {
public:
    static CountyAggregator build(const grid::GridCase& c);

    // Distributes any per-bus quantity (load, shed) onto counties.
    std::map<std::string, double> aggregate(const std::map<int, double>& per_bus_mw) const;

    const std::vector<std::string>& counties() const { return counties_; }

private:
    std::map<int, std::vector<std::pair<std::string, double>>> bus_weights_;
    std::vector<std::string> counties_; // sorted, distinct
};

// Total demand per county.
std::map<std::string, double> county_demand(const grid::GridCase& c);

// Shed load per county for each dispatch step.
std::vector<std::map<std::string, double>> county_loss_timeseries(
    const std::vector<powerflow::DispatchResult>& steps, const CountyAggregator& agg);

// Per-county max over the series.
std::map<std::string, double> county_peak_loss(
    const std::vector<std::map<std::string, double>>& series);

// Expected normalized loss: mean over storms of (per-storm expected peak /
// county demand). Counties without demand have no meaningful ratio and come
// back as null.
std::map<std::string, std::optional<double>> expected_normalized_loss(
    const std::vector<std::map<std::string, double>>& per_storm_mean_peak_mw,
    const std::map<std::string, double>& demand_mw);

} // namespace stormgrid::impact
