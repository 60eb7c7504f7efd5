#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "stormgrid/errors.hpp"
#include "stormgrid/pipeline.hpp"
#include "stormgrid/runconfig.hpp"

namespace {

struct CliOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> samples;
    std::optional<std::string> out_dir;
    bool allow_default_fragility = false;
};

void add_common(CLI::App* cmd, CliOptions& opt) {
    cmd->add_option("--config", opt.config_path, "Run configuration file")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--seed", opt.seed, "Override base_seed from the configuration");
    cmd->add_option("--samples", opt.samples, "Override n_samples from the configuration")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--out", opt.out_dir, "Override output_dir from the configuration");
    cmd->add_flag("--allow-default-fragility", opt.allow_default_fragility,
                  "Accept built-in flood fragility constants when none are configured");
}

stormgrid::config::RunConfig load(const CliOptions& opt) {
    auto cfg = stormgrid::config::load_run_config(opt.config_path);
    if (opt.seed) cfg.base_seed = *opt.seed;
    if (opt.samples) cfg.n_samples = *opt.samples;
    if (opt.out_dir) cfg.output_dir = *opt.out_dir;
    cfg.allow_default_fragility = opt.allow_default_fragility;
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hurricane and storm-surge vulnerability assessment for power grids"};
    app.set_version_flag("--version", std::string(stormgrid::pipeline::kToolVersion));
    app.require_subcommand(1);

    CliOptions opt;
    CLI::App* validate = app.add_subcommand("validate", "Check every configured input file");
    CLI::App* simulate =
        app.add_subcommand("simulate", "Run the Monte Carlo outage and loss simulation");
    CLI::App* indices =
        app.add_subcommand("indices", "Compute vulnerability indices from simulation outputs");
    for (CLI::App* cmd : {validate, simulate, indices}) add_common(cmd, opt);

    CLI11_PARSE(app, argc, argv);

    try {
        const auto cfg = load(opt);
        if (validate->parsed()) return stormgrid::pipeline::run_validate(cfg, std::cout);
        if (simulate->parsed()) {
            stormgrid::pipeline::run_simulate(cfg, std::cout);
        } else {
            stormgrid::pipeline::run_indices(cfg, std::cout);
        }
        return 0;
    } catch (const stormgrid::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
    } catch (const stormgrid::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
    } catch (const stormgrid::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
    } catch (const stormgrid::NotFoundError& e) {
        std::cerr << "error: " << e.what() << "\n";
    } catch (const stormgrid::NumericalError& e) {
        std::cerr << "error: " << e.what() << "\n";
    } catch (const stormgrid::StateError& e) {
        std::cerr << "error: " << e.what() << "\n";
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
