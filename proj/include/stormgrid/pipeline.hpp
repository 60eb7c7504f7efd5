#pragma once

#include <ostream>

#include "stormgrid/runconfig.hpp"

namespace stormgrid::pipeline {

inline constexpr const char* kToolVersion = "0.1.0";

// Dry-run validation of every configured input; prints counts and all
// problems in one pass. Returns the process exit code (0 clean, 2 issues).
int run_validate(const config::RunConfig& cfg, std::ostream& out);

// Ingest -> hazard -> Monte Carlo -> power flow -> county aggregation.
// Writes per-storm loss CSVs, hazard CSVs, the county summary, and the run
// manifest into cfg.output_dir. Throws on any validation problem.
void run_simulate(const config::RunConfig& cfg, std::ostream& log);

// Computes BVI/SSVI/OVI/SVI/ICVI from simulate outputs plus the SVI file,
// and exports the county choropleth GeoJSON.
void run_indices(const config::RunConfig& cfg, std::ostream& log);

} // namespace stormgrid::pipeline
