#include <cmath>

#include "kernels_lane.hpp"
#include "stormgrid/errors.hpp"
#include "stormgrid/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64) || defined(__i386__)
#define STORMGRID_X86 1
#include <immintrin.h>
#endif

namespace stormgrid::kernels::detail {

#if defined(STORMGRID_X86) && defined(__AVX2__) && defined(__FMA__)

bool avx2_supported() {
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

namespace {

// Four eye-to-point half-chord values (pre-asin) per iteration; asin has no
// vector form in libm, so the final arc step runs per lane.
inline __m256d half_chord4(const PointTrig& eye, const TrigTable& pts, std::size_t i) {
    const __m256d sl1 = _mm256_set1_pd(eye.sin_lat);
    const __m256d cl1 = _mm256_set1_pd(eye.cos_lat);
    const __m256d sn1 = _mm256_set1_pd(eye.sin_lon);
    const __m256d cn1 = _mm256_set1_pd(eye.cos_lon);
    const __m256d half = _mm256_set1_pd(0.5);
    const __m256d zero = _mm256_setzero_pd();
    const __m256d one = _mm256_set1_pd(1.0);

    const __m256d sl2 = _mm256_loadu_pd(pts.sin_lat.data() + i);
    const __m256d cl2 = _mm256_loadu_pd(pts.cos_lat.data() + i);
    const __m256d sn2 = _mm256_loadu_pd(pts.sin_lon.data() + i);
    const __m256d cn2 = _mm256_loadu_pd(pts.cos_lon.data() + i);

    const __m256d t_lat = _mm256_mul_pd(sl1, sl2);
    const __m256d cos_dlat = _mm256_fmadd_pd(cl1, cl2, t_lat);
    const __m256d t_lon = _mm256_mul_pd(sn1, sn2);
    const __m256d cos_dlon = _mm256_fmadd_pd(cn1, cn2, t_lon);
    const __m256d h_lat = _mm256_fnmadd_pd(half, cos_dlat, half);
    const __m256d h_lon = _mm256_fnmadd_pd(half, cos_dlon, half);
    const __m256d cc = _mm256_mul_pd(cl1, cl2);
    __m256d h = _mm256_fmadd_pd(cc, h_lon, h_lat);

    const __m256d le0 = _mm256_cmp_pd(h, zero, _CMP_LE_OQ);
    h = _mm256_blendv_pd(h, zero, le0);
    const __m256d ge1 = _mm256_cmp_pd(h, one, _CMP_GE_OQ);
    h = _mm256_blendv_pd(h, one, ge1);
    return _mm256_sqrt_pd(h);
}

inline void arc4(const __m256d s, double* d_out) {
    alignas(32) double sbuf[4];
    _mm256_store_pd(sbuf, s);
    for (int k = 0; k < 4; ++k) {
        d_out[k] = (2.0 * geo::kEarthRadiusKm) * std::asin(sbuf[k]);
    }
}

inline __m256d wind4(const __m256d d, const WindShape& sh, const lane::WindCoef& c) {
    const __m256d zero = _mm256_setzero_pd();
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d v_rv = _mm256_set1_pd(sh.r_vmax_km);
    const __m256d v_rs = _mm256_set1_pd(sh.r_s_km);
    const __m256d v_vm = _mm256_set1_pd(sh.v_max);
    const __m256d v_ecf = _mm256_set1_pd(sh.eye_calm_fraction);
    const __m256d v_ain = _mm256_set1_pd(c.a_in);
    const __m256d v_aout = _mm256_set1_pd(c.a_out);
    const __m256d v_iw = _mm256_set1_pd(c.inner_w);
    const __m256d v_ow = _mm256_set1_pd(c.outer_w);

    const __m256d t = _mm256_div_pd(d, v_iw);
    const __m256d vin = _mm256_mul_pd(_mm256_fmadd_pd(v_ain, t, v_ecf), v_vm);
    const __m256d u = _mm256_div_pd(_mm256_sub_pd(d, v_rv), v_ow);
    const __m256d vout = _mm256_mul_pd(_mm256_fmadd_pd(v_aout, u, one), v_vm);

    const __m256d inner = _mm256_cmp_pd(d, v_rv, _CMP_LE_OQ);
    __m256d v = _mm256_blendv_pd(vout, vin, inner);
    const __m256d outside = _mm256_cmp_pd(d, v_rs, _CMP_GT_OQ);
    v = _mm256_blendv_pd(v, zero, outside);
    return v;
}

} // namespace

void haversine_many_avx2(const TrigTable& pts, const PointTrig& eye, double* d_out) {
    const std::size_t n = pts.size();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        arc4(half_chord4(eye, pts, i), d_out + i);
    }
    for (; i < n; ++i) {
        d_out[i] =
            lane::haversine(eye, pts.sin_lat[i], pts.cos_lat[i], pts.sin_lon[i], pts.cos_lon[i]);
    }
}

void wind_profile_many_avx2(const double* d_km, std::size_t n, const WindShape& shape,
                            double* wind_out) {
    const lane::WindCoef c(shape);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(wind_out + i, wind4(_mm256_loadu_pd(d_km + i), shape, c));
    }
    for (; i < n; ++i) {
        wind_out[i] = lane::wind(d_km[i], shape, c);
    }
}

void linear_ramp_many_avx2(const double* x, const double* lo, const double* hi, std::size_t n,
                           double* out) {
    const __m256d zero = _mm256_setzero_pd();
    const __m256d one = _mm256_set1_pd(1.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vx = _mm256_loadu_pd(x + i);
        const __m256d vlo = _mm256_loadu_pd(lo + i);
        const __m256d vhi = _mm256_loadu_pd(hi + i);
        __m256d r = _mm256_div_pd(_mm256_sub_pd(vx, vlo), _mm256_sub_pd(vhi, vlo));
        const __m256d le0 = _mm256_cmp_pd(r, zero, _CMP_LE_OQ);
        r = _mm256_blendv_pd(r, zero, le0);
        const __m256d ge1 = _mm256_cmp_pd(r, one, _CMP_GE_OQ);
        r = _mm256_blendv_pd(r, one, ge1);
        _mm256_storeu_pd(out + i, r);
    }
    for (; i < n; ++i) {
        out[i] = lane::ramp(x[i], lo[i], hi[i]);
    }
}

double max_wind_profile_avx2(const TrigTable& pts, const PointTrig& eye, const WindShape& shape) {
    const lane::WindCoef c(shape);
    const std::size_t n = pts.size();
    __m256d vbest = _mm256_setzero_pd();
    std::size_t i = 0;
    alignas(32) double dbuf[4];
    for (; i + 4 <= n; i += 4) {
        arc4(half_chord4(eye, pts, i), dbuf);
        vbest = _mm256_max_pd(vbest, wind4(_mm256_load_pd(dbuf), shape, c));
    }
    alignas(32) double bbuf[4];
    _mm256_store_pd(bbuf, vbest);
    double best = bbuf[0];
    for (int k = 1; k < 4; ++k) {
        if (bbuf[k] > best) best = bbuf[k];
    }
    for (; i < n; ++i) {
        const double d =
            lane::haversine(eye, pts.sin_lat[i], pts.cos_lat[i], pts.sin_lon[i], pts.cos_lon[i]);
        const double v = lane::wind(d, shape, c);
        if (v > best) best = v;
    }
    return best;
}

#else

bool avx2_supported() { return false; }

void haversine_many_avx2(const TrigTable&, const PointTrig&, double*) {
    throw StateError("avx2 backend not compiled in");
}

void wind_profile_many_avx2(const double*, std::size_t, const WindShape&, double*) {
    throw StateError("avx2 backend not compiled in");
}

void linear_ramp_many_avx2(const double*, const double*, const double*, std::size_t, double*) {
    throw StateError("avx2 backend not compiled in");
}

double max_wind_profile_avx2(const TrigTable&, const PointTrig&, const WindShape&) {
    throw StateError("avx2 backend not compiled in");
}

#endif

} // namespace stormgrid::kernels::detail
