#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stormgrid/geo.hpp"
#include "stormgrid/util.hpp"

namespace stormgrid::hurricane {

struct TrackPoint {
    std::int64_t time_utc = 0; // epoch seconds
    geo::GeoPoint eye;
    double v_max_ms = 0.0;
    std::optional<double> r_vmax_km;
    std::optional<double> r_s_km;
    int category = -1; // as labeled in the archive, -1..5
};

struct HurricaneTrack {
    std::string storm_id;
    std::string name;
    std::vector<TrackPoint> points;

    // Lifetime category: max over point labels.
    int category() const;
};

// Radial profile shape shared by all storms in a run.
struct WindProfileParams {
    double beta = 0.1;              // fraction of v_max remaining at r_s
    double eye_calm_fraction = 0.0; // fraction of v_max at the exact center

    void validate() const; // beta in (0,1), eye_calm_fraction in [0,1)
};

// Saffir-Simpson band of a sustained wind speed, extended downward:
// -1 tropical depression, 0 tropical storm, 1..5 hurricane categories.
int saffir_simpson_category(double v_max_ms);

// Track CSV: storm_id,name,iso8601_time,lat,lon,vmax_ms,rvmax_km,rs_km,category
// Blank rvmax/rs cells mean the value is missing (not zero). Rows of one
// storm must appear in strictly increasing time order. Cadence other than
// 3 h and category labels inconsistent with the wind speed are warnings.
std::vector<HurricaneTrack> parse_tracks(const std::string& path, WarningLog& warnings);

// Fills missing radii with the mode of a Gaussian kernel density estimate
// over the observed values (pooled across storms). Deterministic; the seed
// is reserved for a sampling-based variant. Requires at least 5 observed
// values of each radius. Imputed pairs are repaired to keep r_vmax < r_s.
std::vector<HurricaneTrack> impute_missing_radii(const std::vector<HurricaneTrack>& tracks,
                                                 std::uint64_t rng_seed);

// Mode of the Gaussian KDE with Silverman's bandwidth, located by scanning
// a uniform grid across the observed range.
double kde_mode(const std::vector<double>& values);

// Keeps the tracks having at least one point whose wind disk (radius r_s
// around the eye) intersects the box. Radii must be present.
std::vector<HurricaneTrack> filter_by_boundary(const std::vector<HurricaneTrack>& tracks,
                                               const geo::BoundingBox& box);

// Piecewise-linear wind profile as a function of distance from the eye.
double wind_at_radius(double r_km, const TrackPoint& tp, const WindProfileParams& profile);

// Profile evaluated at a geographic point.
double wind_at(const geo::GeoPoint& target, const TrackPoint& tp,
               const WindProfileParams& profile);

// Max profile wind over the polyline densified at `spacing_km`.
double max_wind_on_branch(const std::vector<geo::GeoPoint>& line, const TrackPoint& tp,
                          const WindProfileParams& profile, double spacing_km);

} // namespace stormgrid::hurricane
