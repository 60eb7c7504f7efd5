#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "stormgrid/fragility.hpp"
#include "stormgrid/geo.hpp"
#include "stormgrid/hurricane.hpp"
#include "stormgrid/surge.hpp"

namespace stormgrid::config {

// One run configuration file drives every subcommand. Paths are resolved
// relative to the config file's directory.
struct RunConfig {
    std::string config_path;
    std::string config_text; // raw bytes, hashed into the manifest

    std::string tracks_path;
    std::string grid_case_path;
    std::string surge_path;          // empty: wind-only study
    std::string svi_path;            // empty: indices stage unavailable
    std::string county_geojson_path; // empty: no choropleth export

    geo::BoundingBox boundary;
    std::map<std::string, geo::Polygon> basins;
    std::optional<geo::Polygon> landfall_polygon; // default: landward half of boundary

    hurricane::WindProfileParams profile;
    fragility::WindFragilityTable wind_table;
    fragility::FloodFragilityParams flood_params;
    bool flood_params_configured = false;

    double spacing_km = 1.0;
    double activation_window_hours = 6.0;
    surge::Tide tide = surge::Tide::mean;

    int n_samples = 100;
    std::uint64_t base_seed = 1;
    int workers = 1;
    std::string kernel_backend = "auto";
    std::string output_dir;

    // Set from the command line, never from the file.
    bool allow_default_fragility = false;
};

// Parses and validates the configuration; every provided path must exist.
RunConfig load_run_config(const std::string& path);

} // namespace stormgrid::config
