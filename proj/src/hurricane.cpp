#include "stormgrid/hurricane.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "stormgrid/csv.hpp"
#include "stormgrid/errors.hpp"
#include "stormgrid/kernels.hpp"

namespace stormgrid::hurricane {

namespace {

constexpr std::int64_t kNominalCadenceSec = 3 * 3600;

const std::vector<std::string> kTrackHeader = {
    "storm_id", "name", "iso8601_time", "lat", "lon", "vmax_ms", "rvmax_km", "rs_km", "category"};

double require_double(const std::string& field, const std::string& file, std::size_t line,
                      const std::string& what) {
    auto v = parse_double(field);
    if (!v) {
        throw ParseError(file + ":" + std::to_string(line) + ": bad " + what + " '" + field +
                         "'");
    }
    return *v;
}

} // namespace

int HurricaneTrack::category() const {
    int best = -1;
    for (const auto& p : points) best = std::max(best, p.category);
    return best;
}

void WindProfileParams::validate() const {
    if (!(beta > 0.0 && beta < 1.0)) {
        throw ValidationError("wind profile beta must lie strictly between 0 and 1");
    }
    if (!(eye_calm_fraction >= 0.0 && eye_calm_fraction < 1.0)) {
        throw ValidationError("eye_calm_fraction must lie in [0, 1)");
    }
}

int saffir_simpson_category(double v_max_ms) {
    if (v_max_ms < 18.0) return -1;
    if (v_max_ms < 33.0) return 0;
    if (v_max_ms < 43.0) return 1;
    if (v_max_ms < 50.0) return 2;
    if (v_max_ms < 58.0) return 3;
    if (v_max_ms < 70.0) return 4;
    return 5;
}

std::vector<HurricaneTrack> parse_tracks(const std::string& path, WarningLog& warnings) {
    const csv::Table table = csv::read_file(path, kTrackHeader);

    std::vector<HurricaneTrack> tracks;
    std::map<std::string, std::size_t> index_of; // storm_id -> slot, insertion order kept

    for (const auto& row : table.rows) {
        const auto& f = row.fields;
        const std::string& storm_id = f[0];
        if (storm_id.empty()) {
            throw ParseError(path + ":" + std::to_string(row.line_number) + ": empty storm_id");
        }

        TrackPoint tp;
        auto t = parse_iso8601_utc(f[2]);
        if (!t) {
            throw ParseError(path + ":" + std::to_string(row.line_number) + ": bad timestamp '" +
                             f[2] + "'");
        }
        tp.time_utc = *t;
        tp.eye.lat_deg = require_double(f[3], path, row.line_number, "lat");
        tp.eye.lon_deg = require_double(f[4], path, row.line_number, "lon");
        tp.v_max_ms = require_double(f[5], path, row.line_number, "vmax_ms");
        if (!f[6].empty()) tp.r_vmax_km = require_double(f[6], path, row.line_number, "rvmax_km");
        if (!f[7].empty()) tp.r_s_km = require_double(f[7], path, row.line_number, "rs_km");
        auto cat = parse_int(f[8]);
        if (!cat) {
            throw ParseError(path + ":" + std::to_string(row.line_number) + ": bad category '" +
                             f[8] + "'");
        }
        tp.category = static_cast<int>(*cat);

        const std::string where = path + ":" + std::to_string(row.line_number);
        if (tp.eye.lat_deg < -90.0 || tp.eye.lat_deg > 90.0) {
            throw ValidationError(where + ": latitude out of range");
        }
        if (tp.eye.lon_deg < -180.0 || tp.eye.lon_deg > 180.0) {
            throw ValidationError(where + ": longitude out of range");
        }
        if (!(tp.v_max_ms > 0.0)) {
            throw ValidationError(where + ": vmax_ms must be positive");
        }
        if (tp.r_vmax_km && !(*tp.r_vmax_km > 0.0)) {
            throw ValidationError(where + ": rvmax_km must be positive when present");
        }
        if (tp.r_s_km && !(*tp.r_s_km > 0.0)) {
            throw ValidationError(where + ": rs_km must be positive when present");
        }
        if (tp.r_vmax_km && tp.r_s_km && !(*tp.r_vmax_km < *tp.r_s_km)) {
            throw ValidationError(where + ": rvmax_km must be less than rs_km");
        }
        if (tp.category < -1 || tp.category > 5) {
            throw ValidationError(where + ": category must lie in [-1, 5]");
        }
        if (tp.category != saffir_simpson_category(tp.v_max_ms)) {
            warnings.add(where + ": storm " + storm_id + " category label " +
                         std::to_string(tp.category) + " disagrees with wind speed band " +
                         std::to_string(saffir_simpson_category(tp.v_max_ms)));
        }

        auto [it, inserted] = index_of.try_emplace(storm_id, tracks.size());
        if (inserted) {
            tracks.push_back(HurricaneTrack{storm_id, f[1], {}});
        }
        HurricaneTrack& track = tracks[it->second];
        if (!track.points.empty()) {
            const std::int64_t prev = track.points.back().time_utc;
            if (tp.time_utc <= prev) {
                throw ValidationError(path + ":" + std::to_string(row.line_number) + ": storm " +
                                      storm_id + " timestamps must be strictly increasing");
            }
            if (tp.time_utc - prev != kNominalCadenceSec) {
                warnings.add(where + ": storm " + storm_id + " cadence " +
                             std::to_string(tp.time_utc - prev) + " s deviates from 3 h");
            }
        }
        track.points.push_back(tp);
    }

    for (const auto& track : tracks) {
        if (track.points.size() < 2) {
            throw ValidationError(path + ": storm " + track.storm_id +
                                  " has fewer than 2 track points");
        }
    }
    return tracks;
}

double kde_mode(const std::vector<double>& values) {
    if (values.empty()) throw ValidationError("kde_mode requires at least one value");
    const std::size_t n = values.size();

    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    const double lo = sorted.front();
    const double hi = sorted.back();
    if (lo == hi) return lo;

    double mean = 0.0;
    for (double v : sorted) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : sorted) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));

    // Interpolated quartiles, as in the usual textbook definition.
    auto quantile = [&](double q) {
        const double pos = q * static_cast<double>(n - 1);
        const std::size_t i = static_cast<std::size_t>(pos);
        const double frac = pos - static_cast<double>(i);
        if (i + 1 >= n) return sorted[n - 1];
        return sorted[i] + (sorted[i + 1] - sorted[i]) * frac;
    };
    const double iqr = quantile(0.75) - quantile(0.25);

    double spread = std::min(sd, iqr / 1.34);
    if (spread <= 0.0) spread = sd;
    const double h = 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
    if (!(h > 0.0)) return sorted[n / 2];

    // Scan the density on a fixed grid; first maximum wins, which makes the
    // result deterministic regardless of input order.
    constexpr std::size_t kGrid = 4096;
    double best_x = lo;
    double best_density = -1.0;
    for (std::size_t g = 0; g < kGrid; ++g) {
        const double x =
            lo + (hi - lo) * static_cast<double>(g) / static_cast<double>(kGrid - 1);
        double dens = 0.0;
        for (double v : sorted) {
            const double z = (x - v) / h;
            dens += std::exp(-0.5 * z * z);
        }
        if (dens > best_density) {
            best_density = dens;
            best_x = x;
        }
    }
    return best_x;
}

std::vector<HurricaneTrack> impute_missing_radii(const std::vector<HurricaneTrack>& tracks,
                                                 std::uint64_t /*rng_seed*/) {
    std::vector<double> observed_rv;
    std::vector<double> observed_rs;
    std::size_t missing_rv = 0;
    std::size_t missing_rs = 0;
    for (const auto& track : tracks) {
        for (const auto& p : track.points) {
            if (p.r_vmax_km) observed_rv.push_back(*p.r_vmax_km); else ++missing_rv;
            if (p.r_s_km) observed_rs.push_back(*p.r_s_km); else ++missing_rs;
        }
    }
    // A complete archive needs no pool; the minimum applies only when a
    // value actually has to be filled in.
    if (missing_rv == 0 && missing_rs == 0) return tracks;
    if (missing_rv > 0 && observed_rv.size() < 5) {
        throw ValidationError("cannot impute rvmax_km: only " +
                              std::to_string(observed_rv.size()) +
                              " observed values (need at least 5)");
    }
    if (missing_rs > 0 && observed_rs.size() < 5) {
        throw ValidationError("cannot impute rs_km: only " + std::to_string(observed_rs.size()) +
                              " observed values (need at least 5)");
    }

    const double mode_rv = missing_rv > 0 ? kde_mode(observed_rv) : 0.0;
    const double mode_rs = missing_rs > 0 ? kde_mode(observed_rs) : 0.0;

    std::vector<HurricaneTrack> out = tracks;
    for (auto& track : out) {
        for (auto& p : track.points) {
            const bool rv_imputed = !p.r_vmax_km.has_value();
            const bool rs_imputed = !p.r_s_km.has_value();
            if (rv_imputed) p.r_vmax_km = mode_rv;
            if (rs_imputed) p.r_s_km = mode_rs;
            // Repairs only ever touch the imputed side; observed values are
            // kept as recorded.
            if (!(*p.r_vmax_km < *p.r_s_km)) {
                if (rv_imputed && !rs_imputed) {
                    p.r_vmax_km = 0.5 * *p.r_s_km;
                } else {
                    p.r_s_km = 2.0 * *p.r_vmax_km;
                }
            }
        }
    }
    return out;
}

std::vector<HurricaneTrack> filter_by_boundary(const std::vector<HurricaneTrack>& tracks,
                                               const geo::BoundingBox& box) {
    std::vector<HurricaneTrack> kept;
    for (const auto& track : tracks) {
        bool intersects = false;
        for (const auto& p : track.points) {
            if (!p.r_s_km) {
                throw StateError("storm " + track.storm_id +
                                 " has missing rs_km; impute radii before boundary filtering");
            }
            if (geo::disk_intersects_box(p.eye, *p.r_s_km, box)) {
                intersects = true;
                break;
            }
        }
        if (intersects) kept.push_back(track);
    }
    return kept;
}

double wind_at_radius(double r_km, const TrackPoint& tp, const WindProfileParams& profile) {
    if (!tp.r_vmax_km || !tp.r_s_km) {
        throw StateError("wind profile evaluated with missing radii; impute first");
    }
    const double rv = *tp.r_vmax_km;
    const double rs = *tp.r_s_km;
    if (r_km > rs) return 0.0;
    if (r_km <= rv) {
        const double t = r_km / rv;
        return (profile.eye_calm_fraction + (1.0 - profile.eye_calm_fraction) * t) * tp.v_max_ms;
    }
    const double u = (r_km - rv) / (rs - rv);
    return (1.0 + (profile.beta - 1.0) * u) * tp.v_max_ms;
}

double wind_at(const geo::GeoPoint& target, const TrackPoint& tp,
               const WindProfileParams& profile) {
    return wind_at_radius(geo::haversine_km(target, tp.eye), tp, profile);
}

double max_wind_on_branch(const std::vector<geo::GeoPoint>& line, const TrackPoint& tp,
                          const WindProfileParams& profile, double spacing_km) {
    if (!tp.r_vmax_km || !tp.r_s_km) {
        throw StateError("wind profile evaluated with missing radii; impute first");
    }
    const auto samples = geo::sample_polyline(line, spacing_km);
    const auto table = kernels::TrigTable::build(samples);
    const auto eye = kernels::PointTrig::build(tp.eye);
    const kernels::WindShape shape{tp.v_max_ms, *tp.r_vmax_km, *tp.r_s_km, profile.beta,
                                   profile.eye_calm_fraction};
    return kernels::max_wind_profile(table, eye, shape);
}

} // namespace stormgrid::hurricane
