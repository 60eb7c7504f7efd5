#include "fixtures.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <vector>

#include <json.hpp>

#include "stormgrid/geo.hpp"
#include "stormgrid/util.hpp"

namespace fixtures {

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace stormgrid;

namespace {

constexpr std::int64_t kStepSec = 3 * 3600;

std::int64_t base_time() {
    return *parse_iso8601_utc("2005-09-20T00:00:00Z");
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
}

struct TrackRow {
    double lat, lon, vmax;
    int category;
};

// One storm at the fixed 3-hour cadence; all radii present.
std::string track_rows(const std::string& storm_id, const std::string& name,
                       const std::vector<TrackRow>& rows, double rvmax_km, double rs_km) {
    std::string out;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        out += storm_id + "," + name + "," +
               format_iso8601_utc(base_time() + static_cast<std::int64_t>(k) * kStepSec) + "," +
               format_double(rows[k].lat) + "," + format_double(rows[k].lon) + "," +
               format_double(rows[k].vmax) + "," + format_double(rvmax_km) + "," +
               format_double(rs_km) + "," + std::to_string(rows[k].category) + "\n";
    }
    return out;
}

const char* kTrackHeader = "storm_id,name,iso8601_time,lat,lon,vmax_ms,rvmax_km,rs_km,category\n";
const char* kSurgeHeader = "basin,category,direction,speed_mph,tide,lat,lon,depth,unit\n";

// Shared landfalling track: approaches from the southeast, crosses the
// 27..31 / -97..-92 box diagonal between the 12:00 and 15:00 points.
const std::vector<std::pair<double, double>> kLandfallEyes = {
    {27.0, -92.0}, {27.5, -92.6}, {28.0, -93.2}, {28.5, -93.8},
    {29.0, -94.4}, {29.4, -95.0}, {29.8, -95.6}, {30.2, -96.2}};

std::vector<TrackRow> constant_intensity(double vmax, int category) {
    std::vector<TrackRow> rows;
    for (const auto& [lat, lon] : kLandfallEyes) rows.push_back({lat, lon, vmax, category});
    return rows;
}

std::string surge_rows(const std::string& basin, int category, const std::string& direction,
                       double speed_mph, const std::string& tide,
                       const std::vector<geo::GeoPoint>& cells, double depth,
                       const std::string& unit) {
    std::string out;
    for (const auto& cell : cells) {
        out += basin + "," + std::to_string(category) + "," + direction + "," +
               format_double(speed_mph) + "," + tide + "," + format_double(cell.lat_deg) + "," +
               format_double(cell.lon_deg) + "," + format_double(depth) + "," + unit + "\n";
    }
    return out;
}

std::vector<geo::GeoPoint> coastal_sub_locations() {
    return {{29.30, -95.30}, {29.32, -95.10}, {29.34, -94.90}, {29.36, -94.70}, {29.38, -94.50}};
}

std::vector<geo::GeoPoint> inland_sub_locations() {
    return {{29.80, -95.35}, {29.82, -95.15}, {29.84, -94.95}, {29.86, -94.75}, {29.88, -94.55}};
}

std::string svi_csv() {
    return "county_fips,s1,s2,s3,s4\n"
           "48167,0.8,0.7,0.9,0.6\n"
           "48339,0.2,0.3,0.1,0.2\n"
           "48201,0.5,0.5,0.6,0.4\n"
           "48071,0.9,0.8,0.7,0.9\n"
           "48999,0.1,0.1,0.2,0.1\n";
}

ordered_json county_polygons() {
    const std::vector<std::pair<std::string, std::pair<double, double>>> centers = {
        {"48167", {29.3, -95.0}}, {"48339", {29.9, -95.0}}, {"48201", {29.4, -94.5}},
        {"48071", {29.6, -94.3}}, {"48999", {30.5, -93.5}}};
    ordered_json gj;
    gj["type"] = "FeatureCollection";
    gj["features"] = ordered_json::array();
    for (const auto& [fips, center] : centers) {
        const auto [lat, lon] = center;
        ordered_json f;
        f["type"] = "Feature";
        f["properties"] = {{"GEOID", fips}, {"name", "county " + fips}};
        f["geometry"] = {
            {"type", "Polygon"},
            {"coordinates", {{{lon - 0.2, lat - 0.2},
                              {lon + 0.2, lat - 0.2},
                              {lon + 0.2, lat + 0.2},
                              {lon - 0.2, lat + 0.2},
                              {lon - 0.2, lat - 0.2}}}}};
        gj["features"].push_back(std::move(f));
    }
    return gj;
}

ordered_json base_config() {
    ordered_json cfg;
    cfg["paths"] = {{"tracks", "tracks.csv"}, {"grid_case", "grid.json"}};
    cfg["boundary_box"] = {
        {"lat_min", 27.0}, {"lat_max", 31.0}, {"lon_min", -97.0}, {"lon_max", -92.0}};
    cfg["flood_fragility"] = {{"a_m", 3.0}, {"b", 3.0}};
    cfg["spacing_km"] = 1.0;
    cfg["n_samples"] = 200;
    cfg["base_seed"] = 4242;
    cfg["workers"] = 1;
    cfg["output_dir"] = "out";
    return cfg;
}

StudyPaths study_paths(const std::string& dir) {
    StudyPaths p;
    p.dir = dir;
    p.config = dir + "/config.json";
    p.tracks = dir + "/tracks.csv";
    p.grid_case = dir + "/grid.json";
    p.surge = dir + "/surge.csv";
    p.svi = dir + "/svi.csv";
    p.county_geojson = dir + "/counties_in.geojson";
    p.out_dir = dir + "/out";
    return p;
}

} // namespace

std::string temp_dir(const std::string& name) {
    const fs::path dir = fs::path("testwork") / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir.string();
}

scenario::HazardConfig hazard_config(const config::RunConfig& cfg) {
    scenario::HazardConfig h;
    h.profile = cfg.profile;
    h.wind_table = cfg.wind_table;
    h.flood_params = cfg.flood_params;
    h.spacing_km = cfg.spacing_km;
    h.activation_window_hours = cfg.activation_window_hours;
    h.tide = cfg.tide;
    h.basins = cfg.basins;
    h.landfall_polygon =
        cfg.landfall_polygon ? *cfg.landfall_polygon : scenario::landward_half(cfg.boundary);
    return h;
}

grid::GridCase coastal_case() {
    grid::GridCase c;
    c.base_mva = 100.0;

    const auto coast = coastal_sub_locations();
    const auto inland = inland_sub_locations();
    for (int k = 0; k < 5; ++k) {
        const int lo = 2 * k + 1;
        // Coastal pair: a large pure load and a small load with local
        // generation, two meters above sea level.
        c.buses.push_back({lo, "S0" + std::to_string(k + 1), k == 4 ? "77700" : "77550", 60.0,
                           0.0, std::nullopt});
        c.buses.push_back({lo + 1, "S0" + std::to_string(k + 1), k == 4 ? "77700" : "77550",
                           20.0, 30.0, std::nullopt});
        c.substations.push_back({"S0" + std::to_string(k + 1), coast[k], 2.0, {lo, lo + 1}});
    }
    for (int k = 0; k < 5; ++k) {
        const int lo = 11 + 2 * k;
        const std::string id = k == 4 ? "S10" : "S0" + std::to_string(k + 6);
        // Inland pair: bulk generation well above any surge.
        c.buses.push_back(
            {lo, id, k == 4 ? "77700" : "77301", 10.0, 150.0, std::nullopt});
        c.buses.push_back({lo + 1, id, k == 4 ? "77700" : "77301", 10.0, 0.0, std::nullopt});
        c.substations.push_back({id, inland[k], 12.0, {lo, lo + 1}});
    }

    int next_id = 1;
    auto add = [&](int from, int to, double x, int kv) {
        c.branches.push_back({next_id++, from, to, x, 120.0, kv, {}});
    };
    for (int k = 0; k < 10; ++k) add(2 * k + 1, 2 * k + 2, 0.02, 115); // intra-substation
    for (int k = 0; k < 4; ++k) add(2 * k + 1, 2 * k + 3, 0.03, 115);  // coastal chain
    for (int k = 0; k < 4; ++k) add(11 + 2 * k, 13 + 2 * k, 0.03, 230); // inland chain
    add(1, 11, 0.05, 161); // coast-to-inland ties
    add(5, 15, 0.05, 161);
    add(9, 19, 0.05, 161);
    add(3, 13, 0.05, 161);
    add(7, 17, 0.05, 161);

    c.county_map = {{"77550", "galvestown", "48167", 1.0},
                    {"77301", "conroe", "48339", 1.0},
                    {"77700", "bayline", "48201", 0.6},
                    {"77700", "bayline", "48071", 0.4}};
    c.finalize();
    return c;
}

StudyPaths write_coastal_study(const std::string& dir) {
    const StudyPaths p = study_paths(dir);
    write_text(p.grid_case, grid::serialize_grid_case(coastal_case()));

    std::string tracks = kTrackHeader;
    tracks += track_rows("ALPHA", "Alpha", constant_intensity(28.0, 0), 30.0, 250.0);
    tracks += track_rows("BRAVO", "Bravo", constant_intensity(45.0, 2), 30.0, 250.0);
    tracks += track_rows("CHARLIE", "Charlie", constant_intensity(65.0, 4), 30.0, 250.0);
    write_text(p.tracks, tracks);

    // Category-2 and category-4 maximum-water grids over the coastal basin,
    // plus off-key decoys the selector must pass over (wrong heading, wrong
    // speed). The landfalling track moves NW at about 15 mph.
    const auto cells = coastal_sub_locations();
    std::string surge = kSurgeHeader;
    surge += surge_rows("galveston_bay", 2, "NW", 15.0, "mean", cells, 4.0, "m");
    surge += surge_rows("galveston_bay", 4, "NW", 15.0, "mean", cells, 7.0, "m");
    surge += surge_rows("galveston_bay", 2, "N", 15.0, "mean", cells, 2.0, "m");
    surge += surge_rows("galveston_bay", 4, "N", 15.0, "mean", cells, 2.0, "m");
    surge += surge_rows("galveston_bay", 2, "NW", 40.0, "mean", cells, 8.2021, "ft");
    surge += surge_rows("galveston_bay", 4, "NW", 40.0, "mean", cells, 8.2021, "ft");
    write_text(p.surge, surge);

    write_text(p.svi, svi_csv());
    write_text(p.county_geojson, county_polygons().dump(2) + "\n");

    ordered_json cfg = base_config();
    cfg["paths"]["surge"] = "surge.csv";
    cfg["paths"]["svi"] = "svi.csv";
    cfg["paths"]["county_geojson"] = "counties_in.geojson";
    cfg["basins"] = {{"galveston_bay",
                      {{29.2, -95.45}, {29.5, -95.45}, {29.5, -94.4}, {29.2, -94.4}}}};
    write_text(p.config, cfg.dump(2) + "\n");
    return p;
}

StudyPaths write_contrast_study(const std::string& dir) {
    const StudyPaths p = study_paths(dir);
    write_text(p.grid_case, grid::serialize_grid_case(coastal_case()));

    // DELTA carries a tropical-storm label throughout but reaches 33 m/s at
    // the landfall point itself, so its surge lookup is category 1. ECHO is
    // a genuine category 2 that stays offshore.
    std::vector<TrackRow> delta;
    const double delta_v[] = {26.0, 26.0, 28.0, 30.0, 32.0, 33.0, 31.0, 30.0};
    for (std::size_t k = 0; k < kLandfallEyes.size(); ++k) {
        delta.push_back({kLandfallEyes[k].first, kLandfallEyes[k].second, delta_v[k], 0});
    }
    const std::vector<std::pair<double, double>> echo_eyes = {
        {27.6, -92.3}, {27.8, -92.6}, {28.0, -92.9}, {28.2, -93.2},
        {28.3, -93.6}, {28.4, -94.0}, {28.5, -94.4}, {28.6, -94.8}};
    std::vector<TrackRow> echo;
    for (const auto& [lat, lon] : echo_eyes) echo.push_back({lat, lon, 45.0, 2});

    std::string tracks = kTrackHeader;
    tracks += track_rows("DELTA", "Delta", delta, 30.0, 250.0);
    tracks += track_rows("ECHO", "Echo", echo, 30.0, 250.0);
    write_text(p.tracks, tracks);

    // Only the category-1 grid exists: DELTA finds it, ECHO (category 2 at
    // landfall, had it landed) has nothing to select.
    std::string surge = kSurgeHeader;
    surge += surge_rows("galveston_bay", 1, "NW", 15.0, "mean", coastal_sub_locations(), 8.0,
                        "m");
    write_text(p.surge, surge);

    write_text(p.svi, svi_csv());
    write_text(p.county_geojson, county_polygons().dump(2) + "\n");

    ordered_json cfg = base_config();
    cfg["paths"]["surge"] = "surge.csv";
    cfg["paths"]["svi"] = "svi.csv";
    cfg["basins"] = {{"galveston_bay",
                      {{29.2, -95.45}, {29.5, -95.45}, {29.5, -94.4}, {29.2, -94.4}}}};
    cfg["n_samples"] = 400;
    cfg["base_seed"] = 777;
    write_text(p.config, cfg.dump(2) + "\n");
    return p;
}

StudyPaths write_stationary_study(const std::string& dir) {
    const StudyPaths p = study_paths(dir);

    // Both substations sit on the same point 25 km due north of the eye, so
    // the branch collapses to that point. Meridian distance is exact, and
    // with v_max 68 / r_vmax 50 the profile wind there is 68 * 25/50 = 34,
    // giving (34 - 25) / 30 = 0.3 on the 115 kV class at every step.
    const double lat = 27.5 + geo::rad2deg(25.0 / geo::kEarthRadiusKm);
    const geo::GeoPoint site{lat, -93.0};
    grid::GridCase c;
    c.buses.push_back({1, "SA", "70000", 50.0, 0.0, std::nullopt});
    c.buses.push_back({2, "SB", "70000", 0.0, 100.0, std::nullopt});
    c.branches.push_back({1, 1, 2, 0.01, 100.0, 115, {}});
    c.substations.push_back({"SA", site, 5.0, {1}});
    c.substations.push_back({"SB", site, 5.0, {2}});
    c.county_map = {{"70000", "northpoint", "48500", 1.0}};
    c.finalize();
    write_text(p.grid_case, grid::serialize_grid_case(c));

    std::vector<TrackRow> rows(3, TrackRow{27.5, -93.0, 68.0, 4});
    write_text(p.tracks, kTrackHeader + track_rows("FOXTROT", "Foxtrot", rows, 50.0, 250.0));

    ordered_json cfg = base_config();
    cfg["n_samples"] = 1000;
    cfg["base_seed"] = 42;
    write_text(p.config, cfg.dump(2) + "\n");
    return p;
}

void write_gulf_tracks(const std::string& path) {
    std::string out = kTrackHeader;
    char id[16];
    for (int i = 0; i < 97; ++i) {
        std::snprintf(id, sizeof id, "GULF%03d", i + 1);
        const bool inside = i < 26;
        const double lat0 = inside ? 28.0 + 0.08 * (i % 10) : 14.0 + 0.03 * i;
        const double lon0 = inside ? -96.0 + 0.35 * (i % 11) : -55.0 + 0.2 * (i % 20);
        std::vector<TrackRow> rows;
        for (int k = 0; k < 3; ++k) {
            rows.push_back({lat0 + 0.1 * k, lon0 + 0.15 * k, 30.0, 0});
        }
        out += track_rows(id, id, rows, 25.0, inside ? 150.0 : 100.0);
    }
    write_text(path, out);
}

void write_converted_case(const std::string& path) {
    grid::GridCase c;
    c.base_mva = 100.0;

    // 1250 substations carrying 2000 buses: the first 750 hold two buses,
    // the rest one. Load is uniform so the total lands on 67.11 GW.
    const double load_mw = 67110.0 / 2000.0;
    const char* zips[] = {"75001", "75002", "75003", "75004"};
    int bus_id = 1;
    char sub_id[16];
    for (int s = 0; s < 1250; ++s) {
        std::snprintf(sub_id, sizeof sub_id, "S%04d", s + 1);
        const geo::GeoPoint loc{28.0 + 0.05 * (s % 50), -100.0 + 0.08 * (s / 50)};
        std::vector<int> bus_ids;
        const int n_buses = s < 750 ? 2 : 1;
        for (int b = 0; b < n_buses; ++b) {
            const double cap = bus_id % 4 == 0 ? 160.0 : 0.0;
            c.buses.push_back({bus_id, sub_id, zips[s % 4], load_mw, cap, std::nullopt});
            bus_ids.push_back(bus_id);
            ++bus_id;
        }
        c.substations.push_back({sub_id, loc, 10.0, bus_ids});
    }

    const int kvs[] = {115, 161, 230, 500};
    for (int i = 1; i <= 1918; ++i) {
        c.branches.push_back(
            {i, i, i + 1, 0.01 + 0.001 * (i % 7), 300.0, kvs[i % 4], {}});
    }

    c.county_map = {{"75001", "metro_a", "48001", 1.0},
                    {"75002", "metro_b", "48002", 1.0},
                    {"75003", "metro_c", "48003", 1.0},
                    {"75004", "metro_d", "48004", 1.0}};
    c.finalize();
    write_text(path, grid::serialize_grid_case(c));
}

StudyPaths write_converted_study(const std::string& dir) {
    StudyPaths p = study_paths(dir);
    p.surge.clear();
    p.svi.clear();
    p.county_geojson.clear();
    write_converted_case(p.grid_case);

    std::vector<TrackRow> rows = {{30.0, -100.0, 40.0, 1}, {30.2, -100.3, 40.0, 1}};
    write_text(p.tracks, kTrackHeader + track_rows("TEX1", "Tex", rows, 40.0, 200.0));

    ordered_json cfg = base_config();
    cfg["boundary_box"] = {
        {"lat_min", 26.0}, {"lat_max", 36.0}, {"lon_min", -107.0}, {"lon_max", -93.0}};
    write_text(p.config, cfg.dump(2) + "\n");
    return p;
}

} // namespace fixtures
