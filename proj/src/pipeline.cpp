#include "stormgrid/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "stormgrid/csv.hpp"
#include "stormgrid/errors.hpp"
#include "stormgrid/fragility.hpp"
#include "stormgrid/impact.hpp"
#include "stormgrid/indices.hpp"
#include "stormgrid/kernels.hpp"
#include "stormgrid/powerflow.hpp"
#include "stormgrid/scenario.hpp"
#include "stormgrid/util.hpp"

namespace stormgrid::pipeline {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

// Stage outputs land under their final name only on success.
void write_atomic(const fs::path& path, const std::string& content) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw StateError("cannot write " + tmp.string());
        out << content;
    }
    fs::rename(tmp, path);
}

std::string safe_filename(const std::string& id) {
    std::string out;
    for (char ch : id) {
        const bool ok = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') ||
                        (ch >= '0' && ch <= '9') || ch == '-' || ch == '_';
        out.push_back(ok ? ch : '_');
    }
    return out;
}

struct StormOutcome {
    std::string storm_id;
    std::string name;
    int category = -1;
    std::optional<std::int64_t> landfall_time;
    bool surge_applied = false;
    std::map<std::string, double> mean_peak_mw; // county -> mean over samples of peak loss
    double expected_peak_system_mw = 0.0;
};

scenario::HazardConfig hazard_config(const config::RunConfig& cfg) {
    scenario::HazardConfig hcfg;
    hcfg.profile = cfg.profile;
    hcfg.wind_table = cfg.wind_table;
    hcfg.flood_params = cfg.flood_params;
    hcfg.spacing_km = cfg.spacing_km;
    hcfg.activation_window_hours = cfg.activation_window_hours;
    hcfg.tide = cfg.tide;
    hcfg.basins = cfg.basins;
    hcfg.landfall_polygon =
        cfg.landfall_polygon ? *cfg.landfall_polygon : scenario::landward_half(cfg.boundary);
    return hcfg;
}

std::vector<hurricane::HurricaneTrack> load_storms(const config::RunConfig& cfg,
                                                   WarningLog& warnings) {
    auto tracks = hurricane::parse_tracks(cfg.tracks_path, warnings);
    tracks = hurricane::impute_missing_radii(tracks, cfg.base_seed);
    return hurricane::filter_by_boundary(tracks, cfg.boundary);
}

std::string fips_of_feature(const ordered_json& feature) {
    if (!feature.contains("properties") || !feature["properties"].is_object()) return {};
    const auto& props = feature["properties"];
    for (const char* key : {"fips", "FIPS", "GEOID"}) {
        if (!props.contains(key)) continue;
        const auto& v = props[key];
        if (v.is_string()) return v.get<std::string>();
        if (v.is_number_integer()) return std::to_string(v.get<long long>());
    }
    return {};
}

} // namespace

int run_validate(const config::RunConfig& cfg, std::ostream& out) {
    std::vector<std::string> errors;
    WarningLog warnings;

    try {
        auto all = hurricane::parse_tracks(cfg.tracks_path, warnings);
        out << "storms: " << all.size() << "\n";
        auto imputed = hurricane::impute_missing_radii(all, cfg.base_seed);
        auto kept = hurricane::filter_by_boundary(imputed, cfg.boundary);
        out << "storms_in_boundary: " << kept.size() << "\n";
    } catch (const std::exception& e) {
        errors.push_back(e.what());
    }

    try {
        const grid::GridCase c = grid::parse_grid_case(cfg.grid_case_path, warnings);
        out << "buses: " << c.buses.size() << "\n";
        out << "branches: " << c.branches.size() << "\n";
        out << "substations: " << c.substations.size() << "\n";
        out << "total_load_mw: " << format_double(c.total_load_mw()) << "\n";
        out << "total_load_gw: " << format_double(c.total_load_mw() / 1000.0) << "\n";
        out << "total_capacity_mw: " << format_double(c.total_capacity_mw()) << "\n";
        const auto demand = impact::county_demand(c);
        out << "counties: " << demand.size() << "\n";
    } catch (const std::exception& e) {
        errors.push_back(e.what());
    }

    if (!cfg.surge_path.empty()) {
        try {
            const auto grids = surge::parse_surge_grids(cfg.surge_path);
            out << "surge_grids: " << grids.size() << "\n";
        } catch (const std::exception& e) {
            errors.push_back(e.what());
        }
    }

    if (!cfg.svi_path.empty()) {
        try {
            const auto records = indices::parse_svi(cfg.svi_path);
            out << "svi_records: " << records.size() << "\n";
        } catch (const std::exception& e) {
            errors.push_back(e.what());
        }
    }

    if (!cfg.county_geojson_path.empty()) {
        try {
            std::ifstream in(cfg.county_geojson_path);
            const auto gj = ordered_json::parse(in);
            if (!gj.contains("features") || !gj["features"].is_array()) {
                throw ParseError(cfg.county_geojson_path + ": not a GeoJSON FeatureCollection");
            }
            out << "county_features: " << gj["features"].size() << "\n";
        } catch (const std::exception& e) {
            errors.push_back(e.what());
        }
    }

    for (const auto& w : warnings.messages()) out << "warning: " << w << "\n";
    if (!errors.empty()) {
        out << "FAIL: " << errors.size() << " problem(s)\n";
        for (const auto& e : errors) out << "error: " << e << "\n";
        return 2;
    }
    out << "OK\n";
    return 0;
}

void run_simulate(const config::RunConfig& cfg, std::ostream& log) {
    if (!cfg.flood_params_configured && !cfg.allow_default_fragility) {
        throw ConfigError(
            "flood fragility constants are not configured; set flood_fragility.a_m and "
            "flood_fragility.b, or pass --allow-default-fragility to accept the "
            "uncalibrated defaults");
    }
    kernels::configure_backend(cfg.kernel_backend);

    WarningLog warnings;
    const auto storms = load_storms(cfg, warnings);
    if (storms.empty()) {
        throw ValidationError("no storms intersect the boundary region");
    }
    const grid::GridCase c = grid::parse_grid_case(cfg.grid_case_path, warnings);
    std::vector<surge::SurgeGrid> surge_grids;
    if (!cfg.surge_path.empty()) surge_grids = surge::parse_surge_grids(cfg.surge_path);

    const impact::CountyAggregator agg = impact::CountyAggregator::build(c);
    const auto demand = impact::county_demand(c);
    const auto hcfg = hazard_config(cfg);

    fs::create_directories(cfg.output_dir);

    std::vector<StormOutcome> outcomes;
    std::map<int, double> branch_raw_sum;       // sum over storms of max-t wind prob
    std::map<std::string, double> sub_raw_sum;  // sum over storms of basin-avg flood prob

    for (const auto& track : storms) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto hz = scenario::compute_storm_hazard(track, c, surge_grids, hcfg);

        struct SampleResult {
            std::map<std::string, double> county_peak_mw;
            double system_peak_mw = 0.0;
        };
        auto results = scenario::map_samples<SampleResult>(
            hz, cfg.n_samples, cfg.base_seed, cfg.workers,
            [&](const scenario::OutageScenario& sc) {
                SampleResult r;
                const std::set<int>* prev = nullptr;
                powerflow::DispatchResult dispatch;
                std::map<std::string, double> step_loss;
                for (std::size_t t = 0; t < sc.failed_branches_total.size(); ++t) {
                    const auto& failed = sc.failed_branches_total[t];
                    // Outage sets absorb, so consecutive steps often repeat;
                    // re-solve only when the set changed.
                    if (!prev || *prev != failed) {
                        dispatch = powerflow::evaluate_outage_step(c, failed);
                        std::map<int, double> shed;
                        for (const auto& [bus_id, d] : dispatch.per_bus) {
                            shed[bus_id] = d.shed_load_mw;
                        }
                        step_loss = agg.aggregate(shed);
                    }
                    prev = &failed;
                    r.system_peak_mw = std::max(r.system_peak_mw, dispatch.total_shed_mw);
                    for (const auto& [fips, loss] : step_loss) {
                        auto [it, inserted] = r.county_peak_mw.emplace(fips, loss);
                        if (!inserted) it->second = std::max(it->second, loss);
                    }
                }
                return r;
            });

        StormOutcome outcome;
        outcome.storm_id = track.storm_id;
        outcome.name = track.name;
        outcome.category = track.category();
        outcome.landfall_time = hz.landfall_time;
        for (double p : hz.p_flood) {
            if (p > 0.0) outcome.surge_applied = true;
        }
        // Fixed-order reduction over sample index keeps the output identical
        // for every worker count.
        for (const auto& r : results) {
            outcome.expected_peak_system_mw += r.system_peak_mw;
            for (const auto& [fips, peak] : r.county_peak_mw) {
                outcome.mean_peak_mw[fips] += peak;
            }
        }
        const double inv_n = 1.0 / static_cast<double>(cfg.n_samples);
        outcome.expected_peak_system_mw *= inv_n;
        for (auto& [fips, sum] : outcome.mean_peak_mw) sum *= inv_n;

        for (std::size_t b = 0; b < hz.branch_ids.size(); ++b) {
            double max_p = 0.0;
            for (std::size_t t = 0; t < hz.p_branch.size(); ++t) {
                max_p = std::max(max_p, hz.p_branch[t][b]);
            }
            branch_raw_sum[hz.branch_ids[b]] += max_p;
        }
        for (std::size_t s = 0; s < hz.substation_ids.size(); ++s) {
            double basin_avg = 0.0;
            if (!hz.basin_depths[s].empty()) {
                for (const auto& [basin, depth] : hz.basin_depths[s]) {
                    basin_avg += fragility::substation_outage_prob(depth, cfg.flood_params);
                }
                basin_avg /= static_cast<double>(hz.basin_depths[s].size());
            }
            sub_raw_sum[hz.substation_ids[s]] += basin_avg;
        }

        const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::steady_clock::now() - t0);
        log << "storm " << track.storm_id << ": " << cfg.n_samples << " samples, "
            << "expected peak system loss " << format_double(outcome.expected_peak_system_mw)
            << " MW (" << elapsed.count() << " ms)\n";
        outcomes.push_back(std::move(outcome));
    }

    // Per-storm county loss files.
    for (const auto& outcome : outcomes) {
        std::string body = "county_fips,demand_mw,storm_id,peak_loss_mw,norm_loss\n";
        for (const auto& [fips, dem] : demand) {
            auto it = outcome.mean_peak_mw.find(fips);
            const double peak = it != outcome.mean_peak_mw.end() ? it->second : 0.0;
            body += fips + "," + format_double(dem) + "," + outcome.storm_id + "," +
                    format_double(peak) + ",";
            if (dem > 0.0) body += format_double(std::min(1.0, peak / dem));
            body += "\n";
        }
        write_atomic(fs::path(cfg.output_dir) / ("losses_" + safe_filename(outcome.storm_id) +
                                                 ".csv"),
                     body);
    }

    // County summary with the expectation over storms.
    {
        std::vector<std::map<std::string, double>> per_storm;
        for (const auto& o : outcomes) per_storm.push_back(o.mean_peak_mw);
        const auto expected = impact::expected_normalized_loss(per_storm, demand);
        std::string body = "county_fips,demand_mw,expected_norm_loss\n";
        for (const auto& [fips, dem] : demand) {
            body += fips + "," + format_double(dem) + ",";
            const auto& v = expected.at(fips);
            if (v) body += format_double(*v);
            body += "\n";
        }
        write_atomic(fs::path(cfg.output_dir) / "county_summary.csv", body);
    }

    // Storm table.
    {
        std::string body =
            "storm_id,name,category,landfall_time,surge_applied,n_samples,"
            "expected_peak_system_loss_mw\n";
        for (const auto& o : outcomes) {
            body += o.storm_id + "," + o.name + "," + std::to_string(o.category) + ",";
            if (o.landfall_time) body += format_iso8601_utc(*o.landfall_time);
            body += std::string(",") + (o.surge_applied ? "1" : "0") + "," +
                    std::to_string(cfg.n_samples) + "," +
                    format_double(o.expected_peak_system_mw) + "\n";
        }
        write_atomic(fs::path(cfg.output_dir) / "storms.csv", body);
    }

    // Component hazard statistics (inputs to the vulnerability indices).
    {
        const double inv = 1.0 / static_cast<double>(outcomes.size());
        std::string body = "branch_id,mean_max_outage_prob\n";
        for (const auto& [branch_id, sum] : branch_raw_sum) {
            body += std::to_string(branch_id) + "," + format_double(sum * inv) + "\n";
        }
        write_atomic(fs::path(cfg.output_dir) / "branch_hazard.csv", body);

        body = "substation_id,mean_outage_prob\n";
        for (const auto& [sub_id, sum] : sub_raw_sum) {
            body += sub_id + "," + format_double(sum * inv) + "\n";
        }
        write_atomic(fs::path(cfg.output_dir) / "substation_hazard.csv", body);
    }

    // Run manifest: everything needed to reproduce or audit the run.
    {
        ordered_json m;
        m["tool_version"] = kToolVersion;
        m["config_hash"] = to_hex(fnv1a64(cfg.config_text));
        m["base_seed"] = cfg.base_seed;
        m["n_samples"] = cfg.n_samples;
        m["workers"] = cfg.workers;
        m["kernel_backend"] = kernels::backend_name(kernels::active_backend());
        const auto now = std::chrono::system_clock::now();
        m["generated_at"] = format_iso8601_utc(
            std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count());
        m["storms"] = ordered_json::array();
        for (const auto& o : outcomes) {
            ordered_json sj;
            sj["storm_id"] = o.storm_id;
            sj["name"] = o.name;
            sj["category"] = o.category;
            sj["samples"] = cfg.n_samples;
            sj["surge_applied"] = o.surge_applied;
            m["storms"].push_back(std::move(sj));
        }
        m["outputs"] = ordered_json::array();
        for (const auto& o : outcomes) {
            m["outputs"].push_back("losses_" + safe_filename(o.storm_id) + ".csv");
        }
        for (const char* f : {"county_summary.csv", "storms.csv", "branch_hazard.csv",
                              "substation_hazard.csv"}) {
            m["outputs"].push_back(f);
        }
        for (const auto& w : warnings.messages()) m["warnings"].push_back(w);
        write_atomic(fs::path(cfg.output_dir) / "manifest.json", m.dump(2) + "\n");
    }

    log << "simulated " << outcomes.size() << " storm(s) x " << cfg.n_samples
        << " samples into " << cfg.output_dir << "\n";
}

void run_indices(const config::RunConfig& cfg, std::ostream& log) {
    const fs::path out_dir(cfg.output_dir);
    const fs::path summary_path = out_dir / "county_summary.csv";
    if (!fs::exists(summary_path)) {
        throw StateError("missing " + summary_path.string() + "; run the simulate stage first");
    }
    if (cfg.svi_path.empty()) {
        throw ConfigError("paths.svi is required to compute indices");
    }

    // Simulate-stage outputs.
    indices::CountyIndex expected;
    {
        const auto table = csv::read_file(summary_path.string(),
                                          {"county_fips", "demand_mw", "expected_norm_loss"});
        for (const auto& row : table.rows) {
            std::optional<double> v;
            if (!row.fields[2].empty()) v = parse_double(row.fields[2]);
            expected.emplace(row.fields[0], v);
        }
    }
    std::map<int, double> branch_raw;
    {
        const auto table = csv::read_file((out_dir / "branch_hazard.csv").string(),
                                          {"branch_id", "mean_max_outage_prob"});
        for (const auto& row : table.rows) {
            branch_raw.emplace(static_cast<int>(*parse_int(row.fields[0])),
                               *parse_double(row.fields[1]));
        }
    }
    std::map<std::string, double> sub_raw;
    {
        const auto table = csv::read_file((out_dir / "substation_hazard.csv").string(),
                                          {"substation_id", "mean_outage_prob"});
        for (const auto& row : table.rows) {
            sub_raw.emplace(row.fields[0], *parse_double(row.fields[1]));
        }
    }

    const auto svi_records = indices::parse_svi(cfg.svi_path);
    const auto ovi_table = indices::ovi(expected);
    const auto svi_table = indices::svi(svi_records);
    const auto icvi_table = indices::icvi(svi_records, expected);
    const auto bvi = indices::rank_components(branch_raw);
    const auto ssvi = indices::rank_components(sub_raw);

    auto cell = [](const indices::CountyIndex& table, const std::string& fips) -> std::string {
        auto it = table.find(fips);
        if (it == table.end() || !it->second) return {};
        return format_double(*it->second);
    };

    std::set<std::string> all_counties;
    for (const auto& [fips, v] : ovi_table) all_counties.insert(fips);
    for (const auto& [fips, v] : svi_table) all_counties.insert(fips);

    {
        std::string body = "county_fips,ovi,svi,icvi\n";
        for (const auto& fips : all_counties) {
            body += fips + "," + cell(ovi_table, fips) + "," + cell(svi_table, fips) + "," +
                    cell(icvi_table, fips) + "\n";
        }
        write_atomic(out_dir / "indices_counties.csv", body);
    }
    {
        std::string body = "branch_id,bvi\n";
        for (const auto& [branch_id, v] : bvi) {
            body += std::to_string(branch_id) + "," + format_double(v) + "\n";
        }
        write_atomic(out_dir / "indices_branches.csv", body);
    }
    {
        std::string body = "substation_id,ssvi\n";
        for (const auto& [sub_id, v] : ssvi) {
            body += sub_id + "," + format_double(v) + "\n";
        }
        write_atomic(out_dir / "indices_substations.csv", body);
    }

    // Choropleth: county polygons joined to the index table by FIPS.
    if (!cfg.county_geojson_path.empty()) {
        std::ifstream in(cfg.county_geojson_path);
        if (!in) throw ParseError("cannot open " + cfg.county_geojson_path);
        ordered_json gj;
        try {
            gj = ordered_json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(cfg.county_geojson_path + ": " + e.what());
        }
        if (!gj.contains("features") || !gj["features"].is_array()) {
            throw ParseError(cfg.county_geojson_path + ": not a GeoJSON FeatureCollection");
        }

        ordered_json out_gj;
        out_gj["type"] = "FeatureCollection";
        out_gj["features"] = ordered_json::array();
        for (const auto& feature : gj["features"]) {
            const std::string fips = fips_of_feature(feature);
            if (fips.empty()) {
                throw ParseError(cfg.county_geojson_path +
                                 ": feature without a fips/FIPS/GEOID property");
            }
            ordered_json f;
            f["type"] = "Feature";
            ordered_json props;
            props["fips"] = fips;
            auto put = [&](const char* key, const indices::CountyIndex& table) {
                auto it = table.find(fips);
                if (it != table.end() && it->second) {
                    props[key] = *it->second;
                } else {
                    props[key] = nullptr;
                }
            };
            put("ovi", ovi_table);
            put("svi", svi_table);
            put("icvi", icvi_table);
            f["properties"] = std::move(props);
            f["geometry"] = feature.contains("geometry") ? feature["geometry"] : nullptr;
            out_gj["features"].push_back(std::move(f));
        }
        write_atomic(out_dir / "counties.geojson", out_gj.dump(2) + "\n");
    }

    log << "indices written for " << all_counties.size() << " counties, " << bvi.size()
        << " branches, " << ssvi.size() << " substations\n";
}

} // namespace stormgrid::pipeline
