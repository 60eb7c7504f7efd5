#include "stormgrid/geo.hpp"

#include <algorithm>
#include <cmath>

#include "stormgrid/errors.hpp"

namespace stormgrid::geo {

bool Polygon::contains(const GeoPoint& p) const {
    const std::size_t n = vertices.size();
    if (n < 3) return false;
    bool inside = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const double yi = vertices[i].lat_deg, xi = vertices[i].lon_deg;
        const double yj = vertices[j].lat_deg, xj = vertices[j].lon_deg;
        const bool crosses = (yi > p.lat_deg) != (yj > p.lat_deg);
        if (crosses && p.lon_deg < (xj - xi) * (p.lat_deg - yi) / (yj - yi) + xi) {
            inside = !inside;
        }
    }
    return inside;
}

BoundingBox Polygon::bounds() const {
    if (vertices.empty()) throw ValidationError("polygon has no vertices");
    BoundingBox b{vertices[0].lat_deg, vertices[0].lat_deg, vertices[0].lon_deg,
                  vertices[0].lon_deg};
    for (const auto& v : vertices) {
        b.lat_min = std::min(b.lat_min, v.lat_deg);
        b.lat_max = std::max(b.lat_max, v.lat_deg);
        b.lon_min = std::min(b.lon_min, v.lon_deg);
        b.lon_max = std::max(b.lon_max, v.lon_deg);
    }
    return b;
}

double haversine_km(const GeoPoint& a, const GeoPoint& b) {
    const double lat1 = deg2rad(a.lat_deg);
    const double lat2 = deg2rad(b.lat_deg);
    const double dlat = deg2rad(b.lat_deg - a.lat_deg);
    const double dlon = deg2rad(b.lon_deg - a.lon_deg);
    const double sh_lat = std::sin(dlat * 0.5);
    const double sh_lon = std::sin(dlon * 0.5);
    double h = sh_lat * sh_lat + std::cos(lat1) * std::cos(lat2) * sh_lon * sh_lon;
    h = std::clamp(h, 0.0, 1.0);
    return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(h));
}

double bearing_deg(const GeoPoint& a, const GeoPoint& b) {
    const double lat1 = deg2rad(a.lat_deg);
    const double lat2 = deg2rad(b.lat_deg);
    const double dlon = deg2rad(b.lon_deg - a.lon_deg);
    const double y = std::sin(dlon) * std::cos(lat2);
    const double x =
        std::cos(lat1) * std::sin(lat2) - std::sin(lat1) * std::cos(lat2) * std::cos(dlon);
    double deg = rad2deg(std::atan2(y, x));
    if (deg < 0.0) deg += 360.0;
    if (deg >= 360.0) deg -= 360.0;
    return deg;
}

GeoPoint lerp(const GeoPoint& a, const GeoPoint& b, double t) {
    return {a.lat_deg + (b.lat_deg - a.lat_deg) * t, a.lon_deg + (b.lon_deg - a.lon_deg) * t};
}

std::vector<GeoPoint> sample_polyline(const std::vector<GeoPoint>& line, double spacing_km) {
    if (spacing_km <= 0.0) throw ValidationError("polyline spacing must be positive");
    if (line.empty()) return {};
    std::vector<GeoPoint> out;
    out.push_back(line.front());
    for (std::size_t s = 0; s + 1 < line.size(); ++s) {
        const GeoPoint& p0 = line[s];
        const GeoPoint& p1 = line[s + 1];
        const double len = haversine_km(p0, p1);
        if (len == 0.0) continue;
        std::size_t n = static_cast<std::size_t>(std::ceil(len / spacing_km));
        if (n == 0) n = 1;
        // Even subdivision in lat/lon usually lands under the spacing, but
        // great-circle lengths of unequal sub-segments can exceed it by a
        // hair; bump n until every gap fits.
        for (;;) {
            bool ok = true;
            GeoPoint prev = p0;
            for (std::size_t i = 1; i <= n; ++i) {
                const GeoPoint q = lerp(p0, p1, static_cast<double>(i) / static_cast<double>(n));
                if (haversine_km(prev, q) > spacing_km) {
                    ok = false;
                    break;
                }
                prev = q;
            }
            if (ok) break;
            ++n;
        }
        for (std::size_t i = 1; i <= n; ++i) {
            out.push_back(lerp(p0, p1, static_cast<double>(i) / static_cast<double>(n)));
        }
    }
    return out;
}

std::vector<std::size_t> points_within_radius(const std::vector<GeoPoint>& points,
                                              const GeoPoint& center, double radius_km) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (haversine_km(points[i], center) <= radius_km) out.push_back(i);
    }
    return out;
}

double distance_to_box_km(const GeoPoint& p, const BoundingBox& box) {
    GeoPoint nearest{std::clamp(p.lat_deg, box.lat_min, box.lat_max),
                     std::clamp(p.lon_deg, box.lon_min, box.lon_max)};
    return haversine_km(p, nearest);
}

bool disk_intersects_box(const GeoPoint& center, double radius_km, const BoundingBox& box) {
    return distance_to_box_km(center, box) <= radius_km;
}

} // namespace stormgrid::geo
