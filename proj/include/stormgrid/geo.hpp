#pragma once

#include <cstddef>
#include <vector>

namespace stormgrid::geo {

inline constexpr double kEarthRadiusKm = 6371.0088;
inline constexpr double kMilesToKm = 1.609344;
inline constexpr double kPi = 3.141592653589793238462643383279502884;

inline double deg2rad(double deg) { return deg * (kPi / 180.0); }
inline double rad2deg(double rad) { return rad * (180.0 / kPi); }

struct GeoPoint {
    double lat_deg = 0.0;
    double lon_deg = 0.0;

    bool operator==(const GeoPoint&) const = default;
};

// Inclusive lat/lon rectangle. lon_min/lon_max must not wrap the antimeridian.
struct BoundingBox {
    double lat_min = 0.0;
    double lat_max = 0.0;
    double lon_min = 0.0;
    double lon_max = 0.0;

    bool contains(const GeoPoint& p) const {
        return p.lat_deg >= lat_min && p.lat_deg <= lat_max && p.lon_deg >= lon_min &&
               p.lon_deg <= lon_max;
    }
};

// Simple polygon (no holes) in lat/lon degrees. Closing edge is implicit.
struct Polygon {
    std::vector<GeoPoint> vertices;

    // Even-odd ray cast in plate-carree coordinates. Points exactly on an
    // edge may land on either side; callers needing boundary guarantees
    // should buffer the polygon instead.
    bool contains(const GeoPoint& p) const;

    BoundingBox bounds() const;
};

// Great-circle distance on the mean-radius sphere.
double haversine_km(const GeoPoint& a, const GeoPoint& b);

// Initial bearing from `a` to `b`, degrees clockwise from north in [0, 360).
double bearing_deg(const GeoPoint& a, const GeoPoint& b);

// Linear interpolation in lat/lon space; t in [0, 1].
GeoPoint lerp(const GeoPoint& a, const GeoPoint& b, double t);

// Densify a polyline so consecutive output points are at most `spacing_km`
// apart. Each segment is subdivided evenly (endpoints always kept, shared
// vertices deduplicated). A single-point input passes through unchanged.
std::vector<GeoPoint> sample_polyline(const std::vector<GeoPoint>& line, double spacing_km);

// Indices of `points` within `radius_km` of `center`.
std::vector<std::size_t> points_within_radius(const std::vector<GeoPoint>& points,
                                              const GeoPoint& center, double radius_km);

// Distance from `p` to the closest point of `box` (0 when inside).
double distance_to_box_km(const GeoPoint& p, const BoundingBox& box);

// True when the disk (center, radius) intersects the box.
bool disk_intersects_box(const GeoPoint& center, double radius_km, const BoundingBox& box);

} // namespace stormgrid::geo
