#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "stormgrid/geo.hpp"

// Batch kernels on the hazard hot path (eye-to-point distances, the radial
// wind profile, fragility ramps). Each kernel has a scalar reference
// implementation and an AVX2 variant selected at runtime; both execute the
// same IEEE operation sequence (explicit fma, true division, correctly
// rounded sqrt), so outputs are bit-identical across backends.

namespace stormgrid::kernels {

enum class Backend { scalar, avx2 };

bool backend_available(Backend b);
Backend detect_backend();
Backend active_backend();
void set_backend(Backend b);

// Accepts "auto", "scalar", or "avx2".
void configure_backend(const std::string& name);

const char* backend_name(Backend b);

// Precomputed trig for a fixed point set, laid out per component.
struct TrigTable {
    std::vector<double> sin_lat;
    std::vector<double> cos_lat;
    std::vector<double> sin_lon;
    std::vector<double> cos_lon;

    static TrigTable build(const std::vector<geo::GeoPoint>& pts);
    std::size_t size() const { return sin_lat.size(); }
};

struct PointTrig {
    double sin_lat = 0.0;
    double cos_lat = 1.0;
    double sin_lon = 0.0;
    double cos_lon = 1.0;

    static PointTrig build(const geo::GeoPoint& p);
};

// Piecewise-linear radial profile of sustained wind speed:
// eye_calm_fraction*v_max at the center, v_max at r_vmax_km, decaying to
// beta*v_max at r_s_km (inclusive), zero beyond.
struct WindShape {
    double v_max = 0.0;
    double r_vmax_km = 1.0;
    double r_s_km = 2.0;
    double beta = 0.1;
    double eye_calm_fraction = 0.0;
};

// d_out[i] = great-circle km from `eye` to table point i.
void haversine_many(const TrigTable& pts, const PointTrig& eye, double* d_out);

// wind_out[i] = profile wind at distance d_km[i].
void wind_profile_many(const double* d_km, std::size_t n, const WindShape& shape,
                       double* wind_out);

// out[i] = clamp((x[i] - lo[i]) / (hi[i] - lo[i]), 0, 1). Division is exact
// IEEE division; midpoints of representable (lo, hi) pairs land on exact
// values. Requires hi[i] > lo[i].
void linear_ramp_many(const double* x, const double* lo, const double* hi, std::size_t n,
                      double* out);

// max over table points of the profile wind at their distance from `eye`.
double max_wind_profile(const TrigTable& pts, const PointTrig& eye, const WindShape& shape);

namespace detail {

void haversine_many_scalar(const TrigTable& pts, const PointTrig& eye, double* d_out);
void wind_profile_many_scalar(const double* d_km, std::size_t n, const WindShape& shape,
                              double* wind_out);
void linear_ramp_many_scalar(const double* x, const double* lo, const double* hi, std::size_t n,
                             double* out);
double max_wind_profile_scalar(const TrigTable& pts, const PointTrig& eye,
                               const WindShape& shape);

bool avx2_supported();
void haversine_many_avx2(const TrigTable& pts, const PointTrig& eye, double* d_out);
void wind_profile_many_avx2(const double* d_km, std::size_t n, const WindShape& shape,
                            double* wind_out);
void linear_ramp_many_avx2(const double* x, const double* lo, const double* hi, std::size_t n,
                           double* out);
double max_wind_profile_avx2(const TrigTable& pts, const PointTrig& eye, const WindShape& shape);

} // namespace detail

} // namespace stormgrid::kernels
