#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "stormgrid/fragility.hpp"
#include "stormgrid/geo.hpp"
#include "stormgrid/grid.hpp"
#include "stormgrid/hurricane.hpp"
#include "stormgrid/rng.hpp"
#include "stormgrid/surge.hpp"

namespace stormgrid::scenario {

// Inputs shared by every storm in a run.
struct HazardConfig {
    hurricane::WindProfileParams profile;
    fragility::WindFragilityTable wind_table = fragility::WindFragilityTable::defaults();
    fragility::FloodFragilityParams flood_params;
    double spacing_km = 1.0;
    double activation_window_hours = 6.0;
    surge::Tide tide = surge::Tide::mean;
    std::map<std::string, geo::Polygon> basins;
    geo::Polygon landfall_polygon;
};

// Deterministic per-storm hazard, computed once and shared by all Monte
// Carlo samples: per-step branch wind-failure probabilities, static
// substation flood probabilities, and the surge activation step.
struct StormHazard {
    std::string storm_id;
    int category = -1; // storm label, max over track points
    std::vector<std::int64_t> step_times;

    std::vector<int> branch_ids;
    std::vector<std::vector<double>> gamma_ms; // [step][branch]
    std::vector<std::vector<double>> p_branch; // [step][branch]

    std::vector<std::string> substation_ids;
    std::vector<std::vector<int>> sub_branch_ids; // branches pulled down by each substation
    std::vector<double> flood_depth_m;            // max across containing basins
    std::vector<double> p_flood;
    // Per-substation depth by containing basin (missing grids count as 0);
    // feeds the substation vulnerability statistic.
    std::vector<std::map<std::string, double>> basin_depths;

    std::optional<std::int64_t> landfall_time;
    std::optional<std::size_t> activation_step;
};

// One Monte Carlo draw. Sets are cumulative per step (failures absorb).
struct OutageScenario {
    std::string storm_id;
    std::uint64_t seed = 0;
    std::vector<std::set<int>> failed_branches_wind;
    std::vector<std::set<std::string>> failed_substations;
    std::vector<std::set<int>> failed_branches_flood;
    std::vector<std::set<int>> failed_branches_total;
};

// Default landfall region: the landward (northwest) half of the boundary
// box, i.e. the triangle above its southwest-to-northeast diagonal.
geo::Polygon landward_half(const geo::BoundingBox& box);

// Earliest track time whose eye lies inside the land polygon.
std::optional<std::int64_t> detect_landfall(const hurricane::HurricaneTrack& track,
                                            const geo::Polygon& land);

StormHazard compute_storm_hazard(const hurricane::HurricaneTrack& track,
                                 const grid::GridCase& c,
                                 const std::vector<surge::SurgeGrid>& surge_grids,
                                 const HazardConfig& cfg);

// Draws one scenario. Every random number is a pure hash of
// (seed, component kind, component id, step), so draw order never matters
// and skipped draws never shift anyone else's stream.
OutageScenario sample_scenario(const StormHazard& hazard, std::uint64_t seed);

std::vector<OutageScenario> run_monte_carlo(const StormHazard& hazard, int n_samples,
                                            std::uint64_t base_seed);

// Evaluates fn over samples k = 0..n-1 (sample k seeded base_seed + k) on a
// worker pool, writing results into slot k. Output is identical for any
// worker count.
template <typename R, typename Fn>
std::vector<R> map_samples(const StormHazard& hazard, int n_samples, std::uint64_t base_seed,
                           int workers, Fn&& fn) {
    std::vector<R> results(static_cast<std::size_t>(n_samples));
    std::atomic<int> next{0};
    auto drain = [&] {
        for (;;) {
            const int k = next.fetch_add(1, std::memory_order_relaxed);
            if (k >= n_samples) break;
            OutageScenario sc = sample_scenario(hazard, base_seed + static_cast<std::uint64_t>(k));
            results[static_cast<std::size_t>(k)] = fn(sc);
        }
    };
    if (workers <= 1) {
        drain();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(drain);
        for (auto& t : pool) t.join();
    }
    return results;
}

} // namespace stormgrid::scenario
