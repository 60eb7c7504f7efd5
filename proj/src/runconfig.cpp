#include "stormgrid/runconfig.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "stormgrid/errors.hpp"

namespace stormgrid::config {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

geo::Polygon parse_ring(const json& j, const std::string& ctx) {
    if (!j.is_array() || j.size() < 3) {
        throw ConfigError(ctx + " must be an array of at least 3 [lat, lon] pairs");
    }
    geo::Polygon poly;
    for (const auto& pt : j) {
        if (!pt.is_array() || pt.size() != 2 || !pt[0].is_number() || !pt[1].is_number()) {
            throw ConfigError(ctx + " vertices must be [lat, lon] pairs");
        }
        poly.vertices.push_back({pt[0].get<double>(), pt[1].get<double>()});
    }
    return poly;
}

std::string resolve(const fs::path& base_dir, const std::string& p) {
    const fs::path path(p);
    return path.is_absolute() ? path.string() : (base_dir / path).string();
}

std::string require_existing(const std::string& path, const char* what) {
    if (!fs::exists(path)) {
        throw ConfigError(std::string(what) + " file does not exist: " + path);
    }
    return path;
}

} // namespace

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();

    RunConfig cfg;
    cfg.config_path = path;
    cfg.config_text = buf.str();

    json j;
    try {
        j = json::parse(cfg.config_text);
    } catch (const json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
    const fs::path base_dir = fs::path(path).parent_path();

    if (!j.contains("paths") || !j["paths"].is_object()) {
        throw ConfigError(path + ": missing 'paths' object");
    }
    const auto& paths = j["paths"];
    auto take_path = [&](const char* key, bool required) -> std::string {
        if (!paths.contains(key)) {
            if (required) {
                throw ConfigError(path + ": paths." + key + " is required");
            }
            return {};
        }
        if (!paths[key].is_string()) {
            throw ConfigError(path + ": paths." + key + " must be a string");
        }
        return resolve(base_dir, paths[key].get<std::string>());
    };
    cfg.tracks_path = require_existing(take_path("tracks", true), "tracks");
    cfg.grid_case_path = require_existing(take_path("grid_case", true), "grid case");
    cfg.surge_path = take_path("surge", false);
    if (!cfg.surge_path.empty()) require_existing(cfg.surge_path, "surge");
    cfg.svi_path = take_path("svi", false);
    if (!cfg.svi_path.empty()) require_existing(cfg.svi_path, "SVI");
    cfg.county_geojson_path = take_path("county_geojson", false);
    if (!cfg.county_geojson_path.empty()) {
        require_existing(cfg.county_geojson_path, "county geometry");
    }

    if (!j.contains("boundary_box") || !j["boundary_box"].is_object()) {
        throw ConfigError(path + ": missing 'boundary_box'");
    }
    const auto& bb = j["boundary_box"];
    for (const char* key : {"lat_min", "lat_max", "lon_min", "lon_max"}) {
        if (!bb.contains(key) || !bb[key].is_number()) {
            throw ConfigError(path + ": boundary_box." + key + " is required");
        }
    }
    cfg.boundary = {bb["lat_min"].get<double>(), bb["lat_max"].get<double>(),
                    bb["lon_min"].get<double>(), bb["lon_max"].get<double>()};
    if (!(cfg.boundary.lat_min < cfg.boundary.lat_max) ||
        !(cfg.boundary.lon_min < cfg.boundary.lon_max)) {
        throw ConfigError(path + ": boundary_box min must be below max on both axes");
    }

    if (j.contains("basins")) {
        if (!j["basins"].is_object()) throw ConfigError(path + ": 'basins' must be an object");
        for (const auto& [name, ring] : j["basins"].items()) {
            cfg.basins.emplace(name, parse_ring(ring, path + ": basin '" + name + "'"));
        }
    }
    if (j.contains("landfall_polygon")) {
        cfg.landfall_polygon = parse_ring(j["landfall_polygon"], path + ": landfall_polygon");
    }

    if (j.contains("wind_profile")) {
        const auto& wp = j["wind_profile"];
        if (wp.contains("beta")) cfg.profile.beta = wp["beta"].get<double>();
        if (wp.contains("eye_calm_fraction")) {
            cfg.profile.eye_calm_fraction = wp["eye_calm_fraction"].get<double>();
        }
    }
    cfg.profile.validate();

    cfg.wind_table = fragility::WindFragilityTable::defaults();
    if (j.contains("wind_fragility")) {
        if (!j["wind_fragility"].is_object()) {
            throw ConfigError(path + ": 'wind_fragility' must map voltage class to [v_cri, v_col]");
        }
        cfg.wind_table.thresholds_ms.clear();
        for (const auto& [kv_str, pair] : j["wind_fragility"].items()) {
            auto kv = parse_int(kv_str);
            if (!kv) throw ConfigError(path + ": bad voltage class '" + kv_str + "'");
            if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() ||
                !pair[1].is_number()) {
                throw ConfigError(path + ": wind_fragility." + kv_str +
                                  " must be [v_cri, v_col]");
            }
            cfg.wind_table.thresholds_ms[static_cast<int>(*kv)] = {pair[0].get<double>(),
                                                                   pair[1].get<double>()};
        }
    }
    cfg.wind_table.validate();

    if (j.contains("flood_fragility")) {
        const auto& ff = j["flood_fragility"];
        if (!ff.contains("a_m") || !ff.contains("b")) {
            throw ConfigError(path + ": flood_fragility needs both a_m and b");
        }
        cfg.flood_params.a_m = ff["a_m"].get<double>();
        cfg.flood_params.b = ff["b"].get<double>();
        cfg.flood_params_configured = true;
    }
    cfg.flood_params.validate();

    if (j.contains("spacing_km")) cfg.spacing_km = j["spacing_km"].get<double>();
    if (!(cfg.spacing_km > 0.0)) throw ConfigError(path + ": spacing_km must be positive");
    if (j.contains("activation_window_hours")) {
        cfg.activation_window_hours = j["activation_window_hours"].get<double>();
    }
    if (!(cfg.activation_window_hours > 0.0)) {
        throw ConfigError(path + ": activation_window_hours must be positive");
    }
    if (j.contains("tide")) {
        const std::string t = j["tide"].get<std::string>();
        if (t == "mean") {
            cfg.tide = surge::Tide::mean;
        } else if (t == "high") {
            cfg.tide = surge::Tide::high;
        } else {
            throw ConfigError(path + ": tide must be 'mean' or 'high'");
        }
    }

    if (j.contains("n_samples")) cfg.n_samples = j["n_samples"].get<int>();
    if (cfg.n_samples < 1) throw ConfigError(path + ": n_samples must be at least 1");
    if (j.contains("base_seed")) cfg.base_seed = j["base_seed"].get<std::uint64_t>();
    if (j.contains("workers")) cfg.workers = j["workers"].get<int>();
    if (cfg.workers < 1) throw ConfigError(path + ": workers must be at least 1");
    if (j.contains("kernel_backend")) {
        cfg.kernel_backend = j["kernel_backend"].get<std::string>();
    }

    if (!j.contains("output_dir") || !j["output_dir"].is_string()) {
        throw ConfigError(path + ": 'output_dir' is required");
    }
    cfg.output_dir = resolve(base_dir, j["output_dir"].get<std::string>());

    return cfg;
}

} // namespace stormgrid::config
