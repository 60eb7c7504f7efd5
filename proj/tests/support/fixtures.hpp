#pragma once

#include <string>

#include "stormgrid/grid.hpp"
#include "stormgrid/runconfig.hpp"
#include "stormgrid/scenario.hpp"

// Synthetic study inputs shared by the unit, CLI, and acceptance suites.
// Every writer is deterministic: identical calls produce identical bytes.
namespace fixtures {

struct StudyPaths {
    std::string dir;
    std::string config;
    std::string tracks;
    std::string grid_case;
    std::string surge;
    std::string svi;
    std::string county_geojson;
    std::string out_dir;
};

// Fresh empty directory under the current working directory.
std::string temp_dir(const std::string& name);

// Storm-independent hazard inputs assembled from a run configuration, with
// the default landfall region filled in.
stormgrid::scenario::HazardConfig hazard_config(const stormgrid::config::RunConfig& cfg);

// 20-bus coastal case: five low-lying coastal substations backed by five
// inland generator substations, three counties plus one split city.
stormgrid::grid::GridCase coastal_case();

// Coastal study: coastal_case plus storms ALPHA/BRAVO/CHARLIE (categories
// 0/2/4 on one shared landfalling track), category-2 and category-4 surge
// grids over the coastal basin, SVI themes, and county polygons.
StudyPaths write_coastal_study(const std::string& dir);

// Contrast study: DELTA (labeled category 0, reaches hurricane strength
// exactly at landfall, category-1 surge grid available) versus ECHO
// (category 2, stays offshore, no matching surge grid).
StudyPaths write_contrast_study(const std::string& dir);

// Stationary-eye study: one collapsed branch held at a constant profile
// wind of 34 m/s for three steps, so the per-step failure probability on
// the 115 kV class is 0.3.
StudyPaths write_stationary_study(const std::string& dir);

// 97 synthetic Gulf storms of which exactly 26 have a wind disk touching
// the lat 27..31, lon -97..-92 boundary box.
void write_gulf_tracks(const std::string& path);

// Converted-case stand-in at full scale: 2000 buses, 1250 substations,
// 1918 branches, 67.11 GW of load.
void write_converted_case(const std::string& path);
StudyPaths write_converted_study(const std::string& dir);

} // namespace fixtures
