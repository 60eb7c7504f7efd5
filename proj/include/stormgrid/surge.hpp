#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stormgrid/geo.hpp"
#include "stormgrid/hurricane.hpp"

namespace stormgrid::surge {

inline constexpr double kFeetToMeters = 0.3048;
inline constexpr double kNeighborhoodRadiusKm = 0.5 * geo::kMilesToKm;

enum class Tide { mean, high };

const char* tide_name(Tide t);

// Identifies one maximum-water-depth grid: basin plus the storm parameters
// the grid was computed for. Surge data exists for category 1 and up only.
struct SurgeKey {
    std::string basin;
    int category = 1;
    std::string direction; // 8-point compass label
    double speed_mph = 0.0;
    Tide tide = Tide::mean;
};

struct SurgeCell {
    geo::GeoPoint pos;
    double depth_m = 0.0;
};

struct SurgeGrid {
    SurgeKey key;
    std::vector<SurgeCell> cells;
};

// Storm parameters extracted from a track at landfall, combined with a
// basin + tide by the caller to form a full SurgeKey query.
struct StormMotion {
    int category = 1;
    std::string direction;
    double speed_mph = 0.0;
};

bool is_compass_label(const std::string& label);
double compass_angle_deg(const std::string& label);
std::string quantize_bearing(double bearing_deg);
double angular_distance_deg(double a_deg, double b_deg);

// Surge CSV: basin,category,direction,speed_mph,tide,lat,lon,depth,unit
// with unit in {ft, m}; depths in feet are converted to meters. Rows with
// the same key form one grid.
std::vector<SurgeGrid> parse_surge_grids(const std::string& path);

// Exact match on basin+category+tide, then nearest speed, then nearest
// direction (angular distance), ties broken by lexicographic direction
// label. Throws NotFoundError when no grid matches basin+category+tide;
// callers treat that storm as wind-only.
const SurgeGrid& select_meow(const std::vector<SurgeGrid>& grids, const SurgeKey& query);

// Flood depth at a site: max cell depth within half a mile, minus the site
// elevation, clamped at zero. Zero when no cell lies within the radius.
double inundation_depth(const geo::GeoPoint& location, double elevation_m,
                        const SurgeGrid& grid);

// Category, heading, and translational speed at landfall, from the track
// points surrounding the landfall time (a 6-hour window at the 3-hour
// cadence). Empty when the landfall wind sits below category 1.
std::optional<StormMotion> derive_storm_motion(const hurricane::HurricaneTrack& track,
                                               std::int64_t landfall_time_utc);

} // namespace stormgrid::surge
