#pragma once

#include <cmath>

#include "stormgrid/geo.hpp"
#include "stormgrid/kernels.hpp"

// Single-lane arithmetic shared by the scalar backend and the AVX2 tail
// loop. Every operation here (mul, fma, div, sqrt, asin, compare-select)
// corresponds one-to-one to a vector instruction in the AVX2 body, which is
// what keeps the two backends bit-identical.

namespace stormgrid::kernels::detail::lane {

inline double haversine(const PointTrig& eye, double sl2, double cl2, double sn2, double cn2) {
    const double t_lat = eye.sin_lat * sl2;
    const double cos_dlat = std::fma(eye.cos_lat, cl2, t_lat);
    const double t_lon = eye.sin_lon * sn2;
    const double cos_dlon = std::fma(eye.cos_lon, cn2, t_lon);
    const double h_lat = std::fma(-0.5, cos_dlat, 0.5);
    const double h_lon = std::fma(-0.5, cos_dlon, 0.5);
    const double cc = eye.cos_lat * cl2;
    double h = std::fma(cc, h_lon, h_lat);
    h = h <= 0.0 ? 0.0 : (h >= 1.0 ? 1.0 : h);
    const double s = std::sqrt(h);
    return (2.0 * geo::kEarthRadiusKm) * std::asin(s);
}

// Profile coefficients hoisted out of the element loop.
struct WindCoef {
    double a_in;
    double a_out;
    double inner_w;
    double outer_w;

    explicit WindCoef(const WindShape& sh)
        : a_in(1.0 - sh.eye_calm_fraction),
          a_out(sh.beta - 1.0),
          inner_w(sh.r_vmax_km),
          outer_w(sh.r_s_km - sh.r_vmax_km) {}
};

inline double wind(double d, const WindShape& sh, const WindCoef& c) {
    if (d > sh.r_s_km) return 0.0;
    if (d <= sh.r_vmax_km) {
        const double t = d / c.inner_w;
        return std::fma(c.a_in, t, sh.eye_calm_fraction) * sh.v_max;
    }
    const double u = (d - sh.r_vmax_km) / c.outer_w;
    return std::fma(c.a_out, u, 1.0) * sh.v_max;
}

inline double ramp(double x, double lo, double hi) {
    const double r = (x - lo) / (hi - lo);
    return r <= 0.0 ? 0.0 : (r >= 1.0 ? 1.0 : r);
}

} // namespace stormgrid::kernels::detail::lane
