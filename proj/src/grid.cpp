#include "stormgrid/grid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>

#include <json.hpp>

#include "stormgrid/errors.hpp"

namespace stormgrid::grid {

using nlohmann::ordered_json;

bool Branch::operator==(const Branch& o) const {
    return id == o.id && from_bus == o.from_bus && to_bus == o.to_bus &&
           reactance_pu == o.reactance_pu && rating_mw == o.rating_mw &&
           voltage_kv == o.voltage_kv && geometry == o.geometry;
}

bool Substation::operator==(const Substation& o) const {
    return id == o.id && location == o.location && elevation_m == o.elevation_m &&
           bus_ids == o.bus_ids;
}

bool GridCase::operator==(const GridCase& o) const {
    return base_mva == o.base_mva && buses == o.buses && branches == o.branches &&
           substations == o.substations && county_map == o.county_map;
}

void GridCase::finalize() {
    bus_index.clear();
    substation_index.clear();
    for (std::size_t i = 0; i < buses.size(); ++i) bus_index.emplace(buses[i].id, i);
    for (std::size_t i = 0; i < substations.size(); ++i) {
        substation_index.emplace(substations[i].id, i);
    }
}

const Bus& GridCase::bus(int id) const {
    auto it = bus_index.find(id);
    if (it == bus_index.end()) throw NotFoundError("unknown bus " + std::to_string(id));
    return buses[it->second];
}

const Substation& GridCase::substation(const std::string& id) const {
    auto it = substation_index.find(id);
    if (it == substation_index.end()) throw NotFoundError("unknown substation '" + id + "'");
    return substations[it->second];
}

double GridCase::total_load_mw() const {
    double sum = 0.0;
    for (const auto& b : buses) sum += b.load_mw;
    return sum;
}

double GridCase::total_capacity_mw() const {
    double sum = 0.0;
    for (const auto& b : buses) sum += b.gen_capacity_mw;
    return sum;
}

namespace {

double require_number(const ordered_json& j, const char* key, const std::string& ctx) {
    if (!j.contains(key) || !j[key].is_number()) {
        throw ParseError(ctx + ": missing or non-numeric '" + key + "'");
    }
    return j[key].get<double>();
}

int require_int(const ordered_json& j, const char* key, const std::string& ctx) {
    if (!j.contains(key) || !j[key].is_number_integer()) {
        throw ParseError(ctx + ": missing or non-integer '" + key + "'");
    }
    return j[key].get<int>();
}

std::string require_string(const ordered_json& j, const char* key, const std::string& ctx) {
    if (!j.contains(key) || !j[key].is_string()) {
        throw ParseError(ctx + ": missing or non-string '" + key + "'");
    }
    return j[key].get<std::string>();
}

void validate_semantics(const GridCase& c, std::vector<std::string>& issues,
                        WarningLog& warnings) {
    if (!(c.base_mva > 0.0)) issues.push_back("base_mva must be positive");

    std::set<int> bus_ids;
    for (const auto& b : c.buses) {
        if (!bus_ids.insert(b.id).second) {
            issues.push_back("duplicate bus id " + std::to_string(b.id));
        }
        if (!std::isfinite(b.load_mw) || b.load_mw < 0.0) {
            issues.push_back("bus " + std::to_string(b.id) + " has invalid load_mw");
        }
        if (!std::isfinite(b.gen_capacity_mw) || b.gen_capacity_mw < 0.0) {
            issues.push_back("bus " + std::to_string(b.id) + " has invalid gen_capacity_mw");
        }
    }

    std::set<int> branch_ids;
    for (const auto& br : c.branches) {
        if (!branch_ids.insert(br.id).second) {
            issues.push_back("duplicate branch id " + std::to_string(br.id));
        }
        if (br.from_bus == br.to_bus) {
            issues.push_back("branch " + std::to_string(br.id) + " connects a bus to itself");
        }
        for (int end : {br.from_bus, br.to_bus}) {
            if (!bus_ids.count(end)) {
                issues.push_back("branch " + std::to_string(br.id) + " references absent bus " +
                                 std::to_string(end));
            }
        }
        if (!(br.reactance_pu > 0.0)) {
            issues.push_back("branch " + std::to_string(br.id) +
                             " must have positive reactance_pu");
        }
        if (!(br.rating_mw > 0.0)) {
            issues.push_back("branch " + std::to_string(br.id) + " must have positive rating_mw");
        }
        if (br.voltage_kv <= 0) {
            issues.push_back("branch " + std::to_string(br.id) + " must have positive voltage_kv");
        }
    }

    // Each bus must sit in exactly one substation, consistently with its own
    // substation_id tag.
    std::map<int, std::string> owner;
    std::set<std::string> sub_ids;
    for (const auto& s : c.substations) {
        if (!sub_ids.insert(s.id).second) {
            issues.push_back("duplicate substation id '" + s.id + "'");
        }
        if (s.bus_ids.empty()) {
            issues.push_back("substation '" + s.id + "' has no buses");
        }
        if (s.location.lat_deg < -90.0 || s.location.lat_deg > 90.0 ||
            s.location.lon_deg < -180.0 || s.location.lon_deg > 180.0) {
            issues.push_back("substation '" + s.id + "' location out of range");
        }
        if (s.elevation_m < 0.0) {
            issues.push_back("substation '" + s.id + "' has negative elevation_m");
        }
        for (int bid : s.bus_ids) {
            if (!bus_ids.count(bid)) {
                issues.push_back("substation '" + s.id + "' references absent bus " +
                                 std::to_string(bid));
                continue;
            }
            auto [it, inserted] = owner.emplace(bid, s.id);
            if (!inserted) {
                issues.push_back("bus " + std::to_string(bid) + " appears in substations '" +
                                 it->second + "' and '" + s.id + "'");
            }
        }
    }
    for (const auto& b : c.buses) {
        auto it = owner.find(b.id);
        if (it == owner.end()) {
            issues.push_back("bus " + std::to_string(b.id) + " belongs to no substation");
        } else if (it->second != b.substation_id) {
            issues.push_back("bus " + std::to_string(b.id) + " is tagged substation '" +
                             b.substation_id + "' but listed under '" + it->second + "'");
        }
    }

    // County map: every city's population shares must cover it exactly, and
    // a zip belongs to one city.
    std::map<std::string, std::string> zip_city;
    std::map<std::string, std::map<std::string, double>> city_shares;
    for (const auto& row : c.county_map) {
        if (row.population_share < 0.0 || row.population_share > 1.0) {
            issues.push_back("county map row zip " + row.zip + " has population_share outside " +
                             "[0, 1]");
        }
        auto [it, inserted] = zip_city.emplace(row.zip, row.city);
        if (!inserted && it->second != row.city) {
            issues.push_back("zip " + row.zip + " mapped to two cities ('" + it->second +
                             "', '" + row.city + "')");
        }
        auto [sit, fresh] = city_shares[row.city].emplace(row.county_fips, row.population_share);
        if (!fresh && sit->second != row.population_share) {
            issues.push_back("city '" + row.city + "' county " + row.county_fips +
                             " has conflicting population shares");
        }
    }
    for (const auto& [city, shares] : city_shares) {
        double sum = 0.0;
        for (const auto& [fips, share] : shares) sum += share;
        if (std::fabs(sum - 1.0) > 1e-9) {
            issues.push_back("city '" + city + "' population shares sum to " +
                             format_double(sum) + ", expected 1");
        }
    }
    std::vector<std::string> unmapped;
    for (const auto& b : c.buses) {
        if (!zip_city.count(b.zip)) unmapped.push_back(b.zip);
    }
    if (!unmapped.empty()) {
        std::sort(unmapped.begin(), unmapped.end());
        unmapped.erase(std::unique(unmapped.begin(), unmapped.end()), unmapped.end());
        std::string msg = "bus zips missing from the county map:";
        for (const auto& z : unmapped) msg += " " + z;
        issues.push_back(msg);
    }

    // Connectivity check via union-find; a split case is legal but unusual.
    if (!c.buses.empty() && issues.empty()) {
        std::map<int, int> parent;
        for (const auto& b : c.buses) parent[b.id] = b.id;
        std::function<int(int)> find = [&](int x) {
            while (parent[x] != x) {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            return x;
        };
        for (const auto& br : c.branches) parent[find(br.from_bus)] = find(br.to_bus);
        std::set<int> roots;
        for (const auto& b : c.buses) roots.insert(find(b.id));
        if (roots.size() > 1) {
            warnings.add("grid case is not connected (" + std::to_string(roots.size()) +
                         " components)");
        }
    }
}

} // namespace

GridCase parse_grid_case(const std::string& path, WarningLog& warnings) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open grid case '" + path + "'");
    ordered_json j;
    try {
        j = ordered_json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }

    GridCase c;
    c.base_mva = require_number(j, "base_mva", path);

    if (!j.contains("buses") || !j["buses"].is_array()) {
        throw ParseError(path + ": missing 'buses' array");
    }
    for (const auto& bj : j["buses"]) {
        Bus b;
        b.id = require_int(bj, "id", path + " bus");
        const std::string ctx = path + " bus " + std::to_string(b.id);
        b.substation_id = require_string(bj, "substation_id", ctx);
        b.zip = require_string(bj, "zip", ctx);
        b.load_mw = require_number(bj, "load_mw", ctx);
        b.gen_capacity_mw = require_number(bj, "gen_capacity_mw", ctx);
        if (bj.contains("priority")) b.priority = require_int(bj, "priority", ctx);
        c.buses.push_back(std::move(b));
    }

    if (!j.contains("branches") || !j["branches"].is_array()) {
        throw ParseError(path + ": missing 'branches' array");
    }
    for (const auto& rj : j["branches"]) {
        Branch br;
        br.id = require_int(rj, "id", path + " branch");
        const std::string ctx = path + " branch " + std::to_string(br.id);
        br.from_bus = require_int(rj, "from_bus", ctx);
        br.to_bus = require_int(rj, "to_bus", ctx);
        br.reactance_pu = require_number(rj, "reactance_pu", ctx);
        br.rating_mw = require_number(rj, "rating_mw", ctx);
        br.voltage_kv = require_int(rj, "voltage_kv", ctx);
        if (rj.contains("geometry")) {
            if (!rj["geometry"].is_array()) throw ParseError(ctx + ": geometry must be an array");
            for (const auto& pt : rj["geometry"]) {
                if (!pt.is_array() || pt.size() != 2 || !pt[0].is_number() ||
                    !pt[1].is_number()) {
                    throw ParseError(ctx + ": geometry points must be [lat, lon] pairs");
                }
                br.geometry.push_back({pt[0].get<double>(), pt[1].get<double>()});
            }
        }
        c.branches.push_back(std::move(br));
    }

    if (!j.contains("substations") || !j["substations"].is_array()) {
        throw ParseError(path + ": missing 'substations' array");
    }
    for (const auto& sj : j["substations"]) {
        Substation s;
        s.id = require_string(sj, "id", path + " substation");
        const std::string ctx = path + " substation " + s.id;
        s.location.lat_deg = require_number(sj, "lat", ctx);
        s.location.lon_deg = require_number(sj, "lon", ctx);
        if (sj.contains("elevation_m")) s.elevation_m = require_number(sj, "elevation_m", ctx);
        if (!sj.contains("bus_ids") || !sj["bus_ids"].is_array()) {
            throw ParseError(ctx + ": missing 'bus_ids' array");
        }
        for (const auto& bid : sj["bus_ids"]) {
            if (!bid.is_number_integer()) throw ParseError(ctx + ": bus_ids must be integers");
            s.bus_ids.push_back(bid.get<int>());
        }
        c.substations.push_back(std::move(s));
    }

    if (!j.contains("county_map") || !j["county_map"].is_array()) {
        throw ParseError(path + ": missing 'county_map' array");
    }
    for (const auto& mj : j["county_map"]) {
        CountyMapRow row;
        row.zip = require_string(mj, "zip", path + " county_map");
        const std::string ctx = path + " county_map zip " + row.zip;
        row.city = require_string(mj, "city", ctx);
        row.county_fips = require_string(mj, "county_fips", ctx);
        row.population_share = require_number(mj, "population_share", ctx);
        c.county_map.push_back(std::move(row));
    }

    std::vector<std::string> issues;
    validate_semantics(c, issues, warnings);
    if (!issues.empty()) {
        std::string msg = path + ": " + std::to_string(issues.size()) + " validation problem(s)";
        for (const auto& s : issues) msg += "\n  - " + s;
        throw ValidationError(msg);
    }
    c.finalize();
    return c;
}

std::string serialize_grid_case(const GridCase& c) {
    ordered_json j;
    j["base_mva"] = c.base_mva;
    j["buses"] = ordered_json::array();
    for (const auto& b : c.buses) {
        ordered_json bj;
        bj["id"] = b.id;
        bj["substation_id"] = b.substation_id;
        bj["zip"] = b.zip;
        bj["load_mw"] = b.load_mw;
        bj["gen_capacity_mw"] = b.gen_capacity_mw;
        if (b.priority) bj["priority"] = *b.priority;
        j["buses"].push_back(std::move(bj));
    }
    j["branches"] = ordered_json::array();
    for (const auto& br : c.branches) {
        ordered_json rj;
        rj["id"] = br.id;
        rj["from_bus"] = br.from_bus;
        rj["to_bus"] = br.to_bus;
        rj["reactance_pu"] = br.reactance_pu;
        rj["rating_mw"] = br.rating_mw;
        rj["voltage_kv"] = br.voltage_kv;
        if (!br.geometry.empty()) {
            rj["geometry"] = ordered_json::array();
            for (const auto& p : br.geometry) {
                rj["geometry"].push_back({p.lat_deg, p.lon_deg});
            }
        }
        j["branches"].push_back(std::move(rj));
    }
    j["substations"] = ordered_json::array();
    for (const auto& s : c.substations) {
        ordered_json sj;
        sj["id"] = s.id;
        sj["lat"] = s.location.lat_deg;
        sj["lon"] = s.location.lon_deg;
        sj["elevation_m"] = s.elevation_m;
        sj["bus_ids"] = s.bus_ids;
        j["substations"].push_back(std::move(sj));
    }
    j["county_map"] = ordered_json::array();
    for (const auto& row : c.county_map) {
        ordered_json mj;
        mj["zip"] = row.zip;
        mj["city"] = row.city;
        mj["county_fips"] = row.county_fips;
        mj["population_share"] = row.population_share;
        j["county_map"].push_back(std::move(mj));
    }
    return j.dump(2) + "\n";
}

std::vector<geo::GeoPoint> branch_route(const GridCase& c, const Branch& b) {
    if (!b.geometry.empty()) return b.geometry;
    const geo::GeoPoint a = c.substation(c.bus(b.from_bus).substation_id).location;
    const geo::GeoPoint z = c.substation(c.bus(b.to_bus).substation_id).location;
    if (a == z) return {a};
    return {a, z};
}

std::vector<const Branch*> branches_of_substation(const GridCase& c,
                                                  const std::string& substation_id) {
    const Substation& s = c.substation(substation_id);
    std::set<int> members(s.bus_ids.begin(), s.bus_ids.end());
    std::vector<const Branch*> out;
    for (const auto& br : c.branches) {
        if (members.count(br.from_bus) || members.count(br.to_bus)) out.push_back(&br);
    }
    return out;
}

} // namespace stormgrid::grid
