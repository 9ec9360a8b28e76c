// Command-line front end: simulate a fixed mix, optimize the lowest-cost
// mix, run a named scenario, or write a synthetic fixture dataset.

#include "firmgrid/app.hpp"
#include "firmgrid/config.hpp"
#include "firmgrid/error.hpp"
#include "firmgrid/profiles.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

struct RunFlags {
    std::string config_path;
    std::optional<std::string> out_dir;
    bool trace = false;
    std::optional<std::uint64_t> seed;
};

void add_run_flags(CLI::App* cmd, RunFlags& flags) {
    cmd->add_option("--config", flags.config_path, "run configuration file")->required();
    cmd->add_option("--out", flags.out_dir, "output directory (overrides output_dir)");
    cmd->add_flag("--trace", flags.trace, "write the per-step trace.csv");
    cmd->add_option("--seed", flags.seed, "use a synthetic fixture with this seed");
}

int run_command(const RunFlags& flags, firmgrid::Command command,
                const std::optional<std::string>& scenario) {
    firmgrid::RunConfig config;
    try {
        config = firmgrid::load_config_file(flags.config_path);
    } catch (const firmgrid::Error& e) {
        std::cerr << "error (" << firmgrid::to_string(e.kind()) << "): " << e.what() << '\n';
        return e.kind() == firmgrid::ErrorKind::Config ? firmgrid::exit_code::usage
                                                       : firmgrid::exit_code::data;
    }
    if (flags.out_dir) {
        config.output_dir = *flags.out_dir;
    }
    if (flags.trace) {
        config.write_trace = true;
    }
    if (flags.seed) {
        config.dataset.source = firmgrid::DatasetSource::Synthetic;
        config.dataset.synthetic_seed = *flags.seed;
    }
    if (command == firmgrid::Command::Optimize) {
        config.scenario = "base";
    } else if (scenario) {
        config.scenario = *scenario;
    }
    return firmgrid::run(std::move(config), command, std::cerr);
}

int synthesize(std::uint64_t seed, std::size_t hours, const std::vector<std::string>& droughts,
               const std::string& out_dir) {
    try {
        std::vector<firmgrid::DroughtWindow> windows;
        for (const auto& d : droughts) {
            const auto dash = d.find('-');
            if (dash == std::string::npos) {
                throw firmgrid::Error(firmgrid::ErrorKind::InvalidArgument,
                                      "drought window must be begin-end, got " + d);
            }
            windows.push_back({std::stoul(d.substr(0, dash)), std::stoul(d.substr(dash + 1))});
        }
        const auto data = firmgrid::synthesize_dataset(seed, hours, windows);
        std::filesystem::create_directories(out_dir);
        const std::pair<const char*, const firmgrid::TimeSeries*> files[] = {
            {"demand.csv", &data.demand()},
            {"wind_cf.csv", &data.wind_cf()},
            {"pv_cf.csv", &data.pv_cf()},
        };
        for (const auto& [name, series] : files) {
            std::ofstream out(std::filesystem::path(out_dir) / name, std::ios::binary);
            firmgrid::write_series(out, *series);
            if (!out) {
                throw firmgrid::Error(firmgrid::ErrorKind::Io, std::string("cannot write ") + name);
            }
        }
        return firmgrid::exit_code::ok;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return firmgrid::exit_code::usage;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Firm-dispatchable capacity requirement: dispatch simulation and capacity-mix optimization"};
    app.require_subcommand(1);

    RunFlags sim_flags;
    auto* sim = app.add_subcommand("simulate", "simulate a fixed capacity mix");
    add_run_flags(sim, sim_flags);

    RunFlags opt_flags;
    auto* opt = app.add_subcommand("optimize", "find the lowest-cost mix (base report)");
    add_run_flags(opt, opt_flags);

    RunFlags scen_flags;
    std::string scenario_name;
    auto* scen = app.add_subcommand("scenario", "run a named scenario");
    scen->add_option("name", scenario_name, "scenario name")
        ->required()
        ->check(CLI::IsMember(firmgrid::kScenarioNames));
    add_run_flags(scen, scen_flags);

    std::uint64_t syn_seed = 1;
    std::size_t syn_hours = 168;
    std::vector<std::string> syn_droughts;
    std::string syn_out = "fixture";
    auto* syn = app.add_subcommand("synthesize", "write a synthetic demand/wind/PV fixture");
    syn->add_option("--seed", syn_seed, "generator seed");
    syn->add_option("--hours", syn_hours, "length in hours (>= 24)");
    syn->add_option("--drought", syn_droughts, "zero wind/PV window as begin-end hours");
    syn->add_option("--out", syn_out, "output directory");

    CLI11_PARSE(app, argc, argv);

    if (sim->parsed()) {
        return run_command(sim_flags, firmgrid::Command::Simulate, std::nullopt);
    }
    if (opt->parsed()) {
        return run_command(opt_flags, firmgrid::Command::Optimize, std::nullopt);
    }
    if (scen->parsed()) {
        return run_command(scen_flags, firmgrid::Command::Scenario, scenario_name);
    }
    return synthesize(syn_seed, syn_hours, syn_droughts, syn_out);
}
