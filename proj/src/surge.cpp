#include "stormgrid/surge.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "stormgrid/csv.hpp"
#include "stormgrid/errors.hpp"

namespace stormgrid::surge {

namespace {

constexpr std::array<const char*, 8> kCompass = {"N", "NE", "E", "SE", "S", "SW", "W", "NW"};

const std::vector<std::string> kSurgeHeader = {"basin", "category", "direction", "speed_mph",
                                               "tide",  "lat",      "lon",       "depth",
                                               "unit"};

bool same_key(const SurgeKey& a, const SurgeKey& b) {
    return a.basin == b.basin && a.category == b.category && a.direction == b.direction &&
           a.speed_mph == b.speed_mph && a.tide == b.tide;
}

} // namespace

const char* tide_name(Tide t) { return t == Tide::mean ? "mean" : "high"; }

bool is_compass_label(const std::string& label) {
    return std::find(kCompass.begin(), kCompass.end(), label) != kCompass.end();
}

double compass_angle_deg(const std::string& label) {
    for (std::size_t i = 0; i < kCompass.size(); ++i) {
        if (label == kCompass[i]) return 45.0 * static_cast<double>(i);
    }
    throw ValidationError("unknown compass direction '" + label + "'");
}

std::string quantize_bearing(double bearing_deg) {
    double b = std::fmod(bearing_deg, 360.0);
    if (b < 0.0) b += 360.0;
    const std::size_t i = static_cast<std::size_t>(std::lround(b / 45.0)) % kCompass.size();
    return kCompass[i];
}

double angular_distance_deg(double a_deg, double b_deg) {
    double d = std::fabs(a_deg - b_deg);
    d = std::fmod(d, 360.0);
    return d > 180.0 ? 360.0 - d : d;
}

std::vector<SurgeGrid> parse_surge_grids(const std::string& path) {
    const csv::Table table = csv::read_file(path, kSurgeHeader);

    std::vector<SurgeGrid> grids;
    for (const auto& row : table.rows) {
        const auto& f = row.fields;
        const std::string where = path + ":" + std::to_string(row.line_number);

        SurgeKey key;
        key.basin = f[0];
        if (key.basin.empty()) throw ParseError(where + ": empty basin");
        auto cat = parse_int(f[1]);
        if (!cat) throw ParseError(where + ": bad category '" + f[1] + "'");
        key.category = static_cast<int>(*cat);
        if (key.category < 1 || key.category > 5) {
            throw ValidationError(where + ": surge category must lie in [1, 5]");
        }
        key.direction = f[2];
        if (!is_compass_label(key.direction)) {
            throw ParseError(where + ": bad direction '" + key.direction + "'");
        }
        auto speed = parse_double(f[3]);
        if (!speed) throw ParseError(where + ": bad speed_mph '" + f[3] + "'");
        key.speed_mph = *speed;
        if (f[4] == "mean") {
            key.tide = Tide::mean;
        } else if (f[4] == "high") {
            key.tide = Tide::high;
        } else {
            throw ParseError(where + ": unknown tide label '" + f[4] + "'");
        }

        SurgeCell cell;
        auto lat = parse_double(f[5]);
        auto lon = parse_double(f[6]);
        if (!lat || !lon) throw ParseError(where + ": bad cell coordinates");
        cell.pos = {*lat, *lon};
        if (cell.pos.lat_deg < -90.0 || cell.pos.lat_deg > 90.0 || cell.pos.lon_deg < -180.0 ||
            cell.pos.lon_deg > 180.0) {
            throw ValidationError(where + ": cell coordinates out of range");
        }
        auto depth = parse_double(f[7]);
        if (!depth) throw ParseError(where + ": bad depth '" + f[7] + "'");
        if (*depth < 0.0) throw ValidationError(where + ": negative depth");
        if (f[8] == "ft") {
            cell.depth_m = *depth * kFeetToMeters;
        } else if (f[8] == "m") {
            cell.depth_m = *depth;
        } else {
            throw ParseError(where + ": unknown unit '" + f[8] + "' (expected ft or m)");
        }

        auto it = std::find_if(grids.begin(), grids.end(),
                               [&](const SurgeGrid& g) { return same_key(g.key, key); });
        if (it == grids.end()) {
            grids.push_back(SurgeGrid{key, {cell}});
        } else {
            it->cells.push_back(cell);
        }
    }
    return grids;
}

const SurgeGrid& select_meow(const std::vector<SurgeGrid>& grids, const SurgeKey& query) {
    const SurgeGrid* best = nullptr;
    double best_speed_diff = 0.0;
    double best_dir_diff = 0.0;
    const double query_angle =
        is_compass_label(query.direction) ? compass_angle_deg(query.direction) : 0.0;

    for (const auto& g : grids) {
        if (g.key.basin != query.basin || g.key.category != query.category ||
            g.key.tide != query.tide) {
            continue;
        }
        const double speed_diff = std::fabs(g.key.speed_mph - query.speed_mph);
        const double dir_diff =
            angular_distance_deg(compass_angle_deg(g.key.direction), query_angle);
        bool better = false;
        if (!best) {
            better = true;
        } else if (speed_diff != best_speed_diff) {
            better = speed_diff < best_speed_diff;
        } else if (dir_diff != best_dir_diff) {
            better = dir_diff < best_dir_diff;
        } else {
            better = g.key.direction < best->key.direction;
        }
        if (better) {
            best = &g;
            best_speed_diff = speed_diff;
            best_dir_diff = dir_diff;
        }
    }
    if (!best) {
        throw NotFoundError("no surge grid for basin '" + query.basin + "', category " +
                            std::to_string(query.category) + ", tide " + tide_name(query.tide));
    }
    return *best;
}

double inundation_depth(const geo::GeoPoint& location, double elevation_m,
                        const SurgeGrid& grid) {
    double max_depth = 0.0;
    bool any = false;
    for (const auto& cell : grid.cells) {
        if (geo::haversine_km(location, cell.pos) <= kNeighborhoodRadiusKm) {
            any = true;
            max_depth = std::max(max_depth, cell.depth_m);
        }
    }
    if (!any) return 0.0;
    return std::max(0.0, max_depth - elevation_m);
}

std::optional<StormMotion> derive_storm_motion(const hurricane::HurricaneTrack& track,
                                               std::int64_t landfall_time_utc) {
    const auto& pts = track.points;
    std::size_t at = pts.size();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (pts[i].time_utc == landfall_time_utc) {
            at = i;
            break;
        }
    }
    if (at == pts.size()) {
        throw ValidationError("storm " + track.storm_id +
                              " has no track point at the landfall time");
    }

    const int category = hurricane::saffir_simpson_category(pts[at].v_max_ms);
    if (category < 1) return std::nullopt;

    // Motion from the points bracketing landfall (3 h either side at the
    // nominal cadence); clipped at the track ends.
    const std::size_t lo = at > 0 ? at - 1 : at;
    const std::size_t hi = at + 1 < pts.size() ? at + 1 : at;
    if (lo == hi) {
        throw ValidationError("storm " + track.storm_id +
                              " is a single point; cannot derive motion");
    }
    const double dist_km = geo::haversine_km(pts[lo].eye, pts[hi].eye);
    const double dt_hours =
        static_cast<double>(pts[hi].time_utc - pts[lo].time_utc) / 3600.0;
    const double speed_mph = dist_km / geo::kMilesToKm / dt_hours;
    const std::string direction = quantize_bearing(geo::bearing_deg(pts[lo].eye, pts[hi].eye));

    return StormMotion{category, direction, speed_mph};
}

} // namespace stormgrid::surge
