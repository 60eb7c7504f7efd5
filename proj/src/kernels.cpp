#include "stormgrid/kernels.hpp"

#include <atomic>
#include <cmath>

#include "kernels_lane.hpp"
#include "stormgrid/errors.hpp"

namespace stormgrid::kernels {

namespace {

std::atomic<Backend> g_backend{detect_backend()};

} // namespace

bool backend_available(Backend b) {
    switch (b) {
    case Backend::scalar: return true;
    case Backend::avx2: return detail::avx2_supported();
    }
    return false;
}

Backend detect_backend() {
    return detail::avx2_supported() ? Backend::avx2 : Backend::scalar;
}

Backend active_backend() { return g_backend.load(std::memory_order_relaxed); }

void set_backend(Backend b) {
    if (!backend_available(b)) {
        throw ConfigError(std::string("kernel backend not available on this host: ") +
                          backend_name(b));
    }
    g_backend.store(b, std::memory_order_relaxed);
}

void configure_backend(const std::string& name) {
    if (name == "auto") {
        set_backend(detect_backend());
    } else if (name == "scalar") {
        set_backend(Backend::scalar);
    } else if (name == "avx2") {
        set_backend(Backend::avx2);
    } else {
        throw ConfigError("unknown kernel_backend '" + name +
                          "' (expected auto, scalar, or avx2)");
    }
}

const char* backend_name(Backend b) {
    switch (b) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
    }
    return "?";
}

TrigTable TrigTable::build(const std::vector<geo::GeoPoint>& pts) {
    TrigTable t;
    t.sin_lat.reserve(pts.size());
    t.cos_lat.reserve(pts.size());
    t.sin_lon.reserve(pts.size());
    t.cos_lon.reserve(pts.size());
    for (const auto& p : pts) {
        const double la = geo::deg2rad(p.lat_deg);
        const double lo = geo::deg2rad(p.lon_deg);
        t.sin_lat.push_back(std::sin(la));
        t.cos_lat.push_back(std::cos(la));
        t.sin_lon.push_back(std::sin(lo));
        t.cos_lon.push_back(std::cos(lo));
    }
    return t;
}

PointTrig PointTrig::build(const geo::GeoPoint& p) {
    const double la = geo::deg2rad(p.lat_deg);
    const double lo = geo::deg2rad(p.lon_deg);
    return {std::sin(la), std::cos(la), std::sin(lo), std::cos(lo)};
}

void haversine_many(const TrigTable& pts, const PointTrig& eye, double* d_out) {
    if (active_backend() == Backend::avx2) {
        detail::haversine_many_avx2(pts, eye, d_out);
    } else {
        detail::haversine_many_scalar(pts, eye, d_out);
    }
}

void wind_profile_many(const double* d_km, std::size_t n, const WindShape& shape,
                       double* wind_out) {
    if (active_backend() == Backend::avx2) {
        detail::wind_profile_many_avx2(d_km, n, shape, wind_out);
    } else {
        detail::wind_profile_many_scalar(d_km, n, shape, wind_out);
    }
}

void linear_ramp_many(const double* x, const double* lo, const double* hi, std::size_t n,
                      double* out) {
    if (active_backend() == Backend::avx2) {
        detail::linear_ramp_many_avx2(x, lo, hi, n, out);
    } else {
        detail::linear_ramp_many_scalar(x, lo, hi, n, out);
    }
}

double max_wind_profile(const TrigTable& pts, const PointTrig& eye, const WindShape& shape) {
    if (active_backend() == Backend::avx2) {
        return detail::max_wind_profile_avx2(pts, eye, shape);
    }
    return detail::max_wind_profile_scalar(pts, eye, shape);
}

namespace detail {

void haversine_many_scalar(const TrigTable& pts, const PointTrig& eye, double* d_out) {
    const std::size_t n = pts.size();
    for (std::size_t i = 0; i < n; ++i) {
        d_out[i] =
            lane::haversine(eye, pts.sin_lat[i], pts.cos_lat[i], pts.sin_lon[i], pts.cos_lon[i]);
    }
}

void wind_profile_many_scalar(const double* d_km, std::size_t n, const WindShape& shape,
                              double* wind_out) {
    const lane::WindCoef c(shape);
    for (std::size_t i = 0; i < n; ++i) {
        wind_out[i] = lane::wind(d_km[i], shape, c);
    }
}

void linear_ramp_many_scalar(const double* x, const double* lo, const double* hi, std::size_t n,
                             double* out) {
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = lane::ramp(x[i], lo[i], hi[i]);
    }
}

double max_wind_profile_scalar(const TrigTable& pts, const PointTrig& eye,
                               const WindShape& shape) {
    const lane::WindCoef c(shape);
    double best = 0.0;
    const std::size_t n = pts.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double d =
            lane::haversine(eye, pts.sin_lat[i], pts.cos_lat[i], pts.sin_lon[i], pts.cos_lon[i]);
        const double v = lane::wind(d, shape, c);
        if (v > best) best = v;
    }
    return best;
}

} // namespace detail

} // namespace stormgrid::kernels
