#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "stormgrid/geo.hpp"
#include "stormgrid/util.hpp"

namespace stormgrid::grid {

struct Bus {
    int id = 0;
    std::string substation_id;
    std::string zip;
    double load_mw = 0.0;
    double gen_capacity_mw = 0.0;
    // Lower value = shed first when priority-based curtailment is enabled.
    std::optional<int> priority;

    bool operator==(const Bus&) const = default;
};

struct Branch {
    int id = 0;
    int from_bus = 0;
    int to_bus = 0;
    double reactance_pu = 0.0;
    double rating_mw = 0.0;
    int voltage_kv = 0;
    // Optional routed polyline; empty means "straight segment between the
    // endpoint substations".
    std::vector<geo::GeoPoint> geometry;

    bool operator==(const Branch& o) const;
};

struct Substation {
    std::string id;
    geo::GeoPoint location;
    double elevation_m = 3.0;
    std::vector<int> bus_ids;

    bool operator==(const Substation& o) const;
};

struct CountyMapRow {
    std::string zip;
    std::string city;
    std::string county_fips;
    double population_share = 1.0;

    bool operator==(const CountyMapRow&) const = default;
};

struct GridCase {
    double base_mva = 100.0;
    std::vector<Bus> buses;
    std::vector<Branch> branches;
    std::vector<Substation> substations;
    std::vector<CountyMapRow> county_map;

    // Derived lookups, rebuilt by finalize().
    std::unordered_map<int, std::size_t> bus_index;
    std::unordered_map<std::string, std::size_t> substation_index;

    void finalize();
    const Bus& bus(int id) const;
    const Substation& substation(const std::string& id) const;
    double total_load_mw() const;
    double total_capacity_mw() const;

    bool operator==(const GridCase& o) const;
};

// Loads and validates the JSON case. Structural problems raise ParseError
// immediately; semantic problems are collected and raised together in one
// ValidationError. Disconnectedness is a warning, not an error.
GridCase parse_grid_case(const std::string& path, WarningLog& warnings);

// Serialization inverse of parse_grid_case: parse(serialize(c)) == c.
std::string serialize_grid_case(const GridCase& c);

// Effective polyline of a branch: its geometry when routed, otherwise the
// segment between its endpoint substations (a single point when they
// coincide).
std::vector<geo::GeoPoint> branch_route(const GridCase& c, const Branch& b);

// Branches with either endpoint bus inside the substation, each listed once.
std::vector<const Branch*> branches_of_substation(const GridCase& c,
                                                  const std::string& substation_id);

} // namespace stormgrid::grid
