#include "stormgrid/scenario.hpp"

#include <algorithm>

#include "stormgrid/errors.hpp"
#include "stormgrid/kernels.hpp"

namespace stormgrid::scenario {

geo::Polygon landward_half(const geo::BoundingBox& box) {
    return geo::Polygon{{{box.lat_min, box.lon_min},
                         {box.lat_max, box.lon_min},
                         {box.lat_max, box.lon_max}}};
}

std::optional<std::int64_t> detect_landfall(const hurricane::HurricaneTrack& track,
                                            const geo::Polygon& land) {
    for (const auto& p : track.points) {
        if (land.contains(p.eye)) return p.time_utc;
    }
    return std::nullopt;
}

StormHazard compute_storm_hazard(const hurricane::HurricaneTrack& track,
                                 const grid::GridCase& c,
                                 const std::vector<surge::SurgeGrid>& surge_grids,
                                 const HazardConfig& cfg) {
    cfg.profile.validate();
    cfg.wind_table.validate();
    cfg.flood_params.validate();

    StormHazard hz;
    hz.storm_id = track.storm_id;
    hz.category = track.category();
    for (const auto& p : track.points) hz.step_times.push_back(p.time_utc);
    const std::size_t n_steps = hz.step_times.size();
    const std::size_t n_branches = c.branches.size();

    // Wind hazard: per-branch max profile wind at each step, then the
    // fragility ramp across all branches at once.
    hz.branch_ids.reserve(n_branches);
    std::vector<double> lo(n_branches), hi(n_branches);
    std::vector<kernels::TrigTable> routes;
    routes.reserve(n_branches);
    for (std::size_t b = 0; b < n_branches; ++b) {
        const auto& br = c.branches[b];
        hz.branch_ids.push_back(br.id);
        const auto& [v_cri, v_col] = cfg.wind_table.thresholds_for(br.voltage_kv);
        lo[b] = v_cri;
        hi[b] = v_col;
        routes.push_back(kernels::TrigTable::build(
            geo::sample_polyline(grid::branch_route(c, br), cfg.spacing_km)));
    }

    hz.gamma_ms.assign(n_steps, std::vector<double>(n_branches, 0.0));
    hz.p_branch.assign(n_steps, std::vector<double>(n_branches, 0.0));
    for (std::size_t t = 0; t < n_steps; ++t) {
        const auto& tp = track.points[t];
        if (!tp.r_vmax_km || !tp.r_s_km) {
            throw StateError("storm " + track.storm_id +
                             " has missing radii; impute before hazard evaluation");
        }
        const auto eye = kernels::PointTrig::build(tp.eye);
        const kernels::WindShape shape{tp.v_max_ms, *tp.r_vmax_km, *tp.r_s_km, cfg.profile.beta,
                                       cfg.profile.eye_calm_fraction};
        for (std::size_t b = 0; b < n_branches; ++b) {
            hz.gamma_ms[t][b] = kernels::max_wind_profile(routes[b], eye, shape);
        }
        kernels::linear_ramp_many(hz.gamma_ms[t].data(), lo.data(), hi.data(), n_branches,
                                  hz.p_branch[t].data());
    }

    // Substations: which branches each one pulls down, and the static flood
    // field from MEOW grids selected by the storm's landfall parameters.
    hz.substation_ids.reserve(c.substations.size());
    for (const auto& s : c.substations) {
        hz.substation_ids.push_back(s.id);
        std::vector<int> pulled;
        for (const auto* br : grid::branches_of_substation(c, s.id)) pulled.push_back(br->id);
        std::sort(pulled.begin(), pulled.end());
        hz.sub_branch_ids.push_back(std::move(pulled));
    }
    hz.flood_depth_m.assign(c.substations.size(), 0.0);
    hz.p_flood.assign(c.substations.size(), 0.0);
    hz.basin_depths.resize(c.substations.size());

    hz.landfall_time = detect_landfall(track, cfg.landfall_polygon);
    if (hz.landfall_time) {
        const auto motion = surge::derive_storm_motion(track, *hz.landfall_time);
        if (motion) {
            for (std::size_t s = 0; s < c.substations.size(); ++s) {
                const auto& sub = c.substations[s];
                for (const auto& [basin, polygon] : cfg.basins) {
                    if (!polygon.contains(sub.location)) continue;
                    double depth = 0.0;
                    try {
                        const surge::SurgeKey query{basin, motion->category, motion->direction,
                                                    motion->speed_mph, cfg.tide};
                        const auto& grid = surge::select_meow(surge_grids, query);
                        depth = surge::inundation_depth(sub.location, sub.elevation_m, grid);
                    } catch (const NotFoundError&) {
                        // No MEOW for this basin/category/tide: basin
                        // contributes no flood hazard.
                    }
                    hz.basin_depths[s].emplace(basin, depth);
                    hz.flood_depth_m[s] = std::max(hz.flood_depth_m[s], depth);
                }
                hz.p_flood[s] =
                    fragility::substation_outage_prob(hz.flood_depth_m[s], cfg.flood_params);
            }

            const std::int64_t active_from =
                *hz.landfall_time -
                static_cast<std::int64_t>(cfg.activation_window_hours * 3600.0);
            for (std::size_t t = 0; t < n_steps; ++t) {
                if (hz.step_times[t] >= active_from) {
                    hz.activation_step = t;
                    break;
                }
            }
        }
    }
    return hz;
}

OutageScenario sample_scenario(const StormHazard& hazard, std::uint64_t seed) {
    OutageScenario sc;
    sc.storm_id = hazard.storm_id;
    sc.seed = seed;
    const std::size_t n_steps = hazard.step_times.size();
    sc.failed_branches_wind.resize(n_steps);
    sc.failed_substations.resize(n_steps);
    sc.failed_branches_flood.resize(n_steps);
    sc.failed_branches_total.resize(n_steps);

    std::set<int> wind;
    std::set<std::string> subs;
    std::set<int> flood;
    std::set<int> total;

    for (std::size_t t = 0; t < n_steps; ++t) {
        for (std::size_t b = 0; b < hazard.branch_ids.size(); ++b) {
            const int branch_id = hazard.branch_ids[b];
            if (total.count(branch_id)) continue;
            const double p = hazard.p_branch[t][b];
            if (p <= 0.0) continue;
            const double u = rng::uniform(seed, rng::kTagBranchWind,
                                          static_cast<std::uint64_t>(branch_id), t);
            if (u < p) {
                wind.insert(branch_id);
                total.insert(branch_id);
            }
        }

        // The surge field is static, so each substation faces exactly one
        // flood trial, at the activation step.
        if (hazard.activation_step && t == *hazard.activation_step) {
            for (std::size_t s = 0; s < hazard.substation_ids.size(); ++s) {
                const double p = hazard.p_flood[s];
                if (p <= 0.0) continue;
                const double u = rng::uniform(seed, rng::kTagSubstationFlood,
                                              fnv1a64(hazard.substation_ids[s]), 0);
                if (u < p) {
                    subs.insert(hazard.substation_ids[s]);
                    for (int branch_id : hazard.sub_branch_ids[s]) {
                        flood.insert(branch_id);
                        total.insert(branch_id);
                    }
                }
            }
        }

        sc.failed_branches_wind[t] = wind;
        sc.failed_substations[t] = subs;
        sc.failed_branches_flood[t] = flood;
        sc.failed_branches_total[t] = total;
    }
    return sc;
}

std::vector<OutageScenario> run_monte_carlo(const StormHazard& hazard, int n_samples,
                                            std::uint64_t base_seed) {
    if (n_samples < 1) throw ValidationError("n_samples must be at least 1");
    return map_samples<OutageScenario>(hazard, n_samples, base_seed, 1,
                                       [](const OutageScenario& sc) { return sc; });
}

} // namespace stormgrid::scenario
