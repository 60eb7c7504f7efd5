#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "stormgrid/grid.hpp"

namespace stormgrid::powerflow {

struct Island {
    int island_id = 0;
    std::vector<int> bus_ids; // sorted
    double total_load_mw = 0.0;
    double total_capacity_mw = 0.0;
    int slack_bus = 0; // lowest id with capacity, else lowest id
};

struct BusDispatch {
    double served_load_mw = 0.0;
    double shed_load_mw = 0.0;
    double generation_mw = 0.0;
};

struct IslandBalance {
    double shed_fraction = 0.0; // share of island load shed
    std::map<int, BusDispatch> per_bus;
};

struct DispatchResult {
    std::vector<Island> islands;
    std::vector<double> island_shed_fraction;
    std::map<int, BusDispatch> per_bus;
    std::map<int, double> branch_flow_mw; // in-service branches only
    double total_shed_mw = 0.0;
    std::vector<std::string> overloads; // rating exceedances, reported not enforced
};

// Connected components of the bus graph after removing failed branches.
// Islands come out ordered by their lowest bus id.
std::vector<Island> find_islands(const grid::GridCase& c, const std::set<int>& failed_branches);

// Island energy balance. Surplus capacity: all load served, generation
// scaled down uniformly. Deficit: load shed by the uniform island-wide
// fraction (load - capacity) / load, generators at full output. When every
// load bus of the island carries a priority value, shedding instead strips
// lowest-priority buses first, splitting pro rata inside the marginal
// priority tier.
IslandBalance balance_island(const Island& island, const grid::GridCase& c);

// Solves B·theta = P on one island with the slack angle fixed at 0.
// `injections_mw` maps bus id -> net injection (generation - served load).
// Returns bus angles in radians; `flows_mw` receives per-branch MW flow,
// positive from from_bus to to_bus.
std::map<int, double> dc_power_flow(const grid::GridCase& c, const Island& island,
                                    const std::set<int>& failed_branches,
                                    const std::map<int, double>& injections_mw,
                                    std::map<int, double>& flows_mw);

// find_islands -> balance_island -> dc_power_flow, assembled per island.
DispatchResult evaluate_outage_step(const grid::GridCase& c,
                                    const std::set<int>& failed_branches);

} // namespace stormgrid::powerflow
