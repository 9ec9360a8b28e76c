#include "firmgrid/app.hpp"

#include "firmgrid/error.hpp"
#include "firmgrid/numfmt.hpp"
#include "firmgrid/scenarios.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>

namespace firmgrid {

namespace fs = std::filesystem;

namespace {

template <typename Writer>
void write_file(const fs::path& path, Writer&& writer) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorKind::Io, "cannot write " + path.string());
    }
    writer(out);
    out.flush();
    if (!out) {
        throw Error(ErrorKind::Io, "write failed for " + path.string());
    }
}

int code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Config:
        case ErrorKind::InvalidArgument:
            return exit_code::usage;
        case ErrorKind::Infeasible:
            return exit_code::infeasible;
        default:
            return exit_code::data;
    }
}

class Outputs {
public:
    Outputs(const RunConfig& config, const AlignedDataset& data)
        : config_(config), data_(data), dir_(config.output_dir) {}

    void report(const ScenarioReport& r) const {
        write_file(dir_ / "report.csv",
                   [&](std::ostream& o) { write_report_csv(o, {r.rows()}, {"value"}); });
    }

    void trajectory(const OptimResult& o, const std::string& suffix = {}) const {
        const auto name = suffix.empty() ? std::string("trajectory.csv")
                                         : "trajectory_" + suffix + ".csv";
        write_file(dir_ / name, [&](std::ostream& out) { write_trajectory_csv(out, o.trajectory); });
    }

    void trace(const CapacityMix& mix, const AlignedDataset& data, const SimParams& sim) const {
        if (!config_.write_trace) {
            return;
        }
        const auto res = simulate(mix, data, sim, true);
        write_file(dir_ / "trace.csv", [&](std::ostream& o) { write_trace_csv(o, *res.trace); });
    }

    void trace(const CapacityMix& mix) const { trace(mix, data_, config_.sim); }

    const fs::path& dir() const { return dir_; }

private:
    const RunConfig& config_;
    const AlignedDataset& data_;
    fs::path dir_;
};

ScenarioReport simulate_fixed(const RunConfig& config, const AlignedDataset& data, std::ostream& log) {
    CapacityMix mix = config.mix;
    mix.dispatch_gw = config.fixed_dispatch_gw ? *config.fixed_dispatch_gw
                                               : size_dispatch(mix, data, config.sim);
    const auto result = simulate(mix, data, config.sim);
    std::optional<SystemCost> cost;
    if (result.demand_energy_twh > result.unserved_energy_twh) {
        cost = system_cost(mix, result, config.book);
    }
    if (result.unserved_energy_twh > 0.0) {
        log << "warning: " << format_number(result.unserved_energy_twh)
            << " TWh of demand unserved\n";
    }
    return make_report("simulate", demand_stats(data.demand()), mix, result, cost);
}

int execute(RunConfig& config, Command command, std::ostream& log) {
    const auto data = load_dataset(config.dataset);
    const auto stats = demand_stats(data.demand());
    if (stats.peak_gw > 0.0) {
        resolve_search(config, stats.peak_gw);
    }
    fs::create_directories(config.output_dir);
    const Outputs out(config, data);
    write_file(out.dir() / "run_manifest.txt", [&](std::ostream& o) { write_manifest(o, config); });

    const auto& opts = config.search.options;
    if (command == Command::Simulate) {
        const auto report = simulate_fixed(config, data, log);
        out.report(report);
        out.trace(report.mix);
        return exit_code::ok;
    }

    const std::string scenario = command == Command::Optimize ? "base" : config.scenario;
    if (scenario == "pv-only" || scenario == "rigidity") {
        CapacityMix mix = config.mix;
        SimParams sim = config.sim;
        if (scenario == "pv-only" || config.rigidity_mix == "pv-only") {
            const auto pv = run_pv_only(data, config.sim, config.book,
                                        {config.pv_only_max_battery_hours, 1e-6,
                                         config.pv_only_cyclic_soc});
            if (!pv.feasible) {
                log << "infeasible: " << pv.reason << '\n';
                return exit_code::infeasible;
            }
            if (scenario == "pv-only") {
                out.report(*pv.report);
                out.trace(pv.report->mix, data, pv.params);
                return exit_code::ok;
            }
            mix = pv.report->mix;
            sim = pv.params;
        } else if (config.fixed_dispatch_gw) {
            mix.dispatch_gw = *config.fixed_dispatch_gw;
        }
        const auto rig = run_rigidity(mix, data, sim,
                                      {config.rigidity_step, config.rigidity_max_multiplier});
        write_file(out.dir() / "report.csv",
                   [&](std::ostream& o) { write_report_csv(o, {rig.rows()}, {"value"}); });
        CapacityMix failing = mix;
        const auto scaled = scale_demand(data, rig.failure_multiplier);
        failing.dispatch_gw = rig.required_dispatch_gw;
        out.trace(failing, scaled, sim);
        return exit_code::ok;
    }

    const auto space = search_space(config);
    if (scenario == "base" || scenario == "residual-baseload") {
        const auto outcome =
            scenario == "base"
                ? run_base(data, config.sim, config.book, space, opts)
                : run_residual_baseload(data, config.sim, config.book, space,
                                        config.residual_baseload_gw, config.residual_baseload_eaf,
                                        opts);
        out.report(outcome.report);
        out.trajectory(outcome.optimization);
        out.trace(outcome.report.mix);
        return exit_code::ok;
    }
    if (scenario == "low-storage") {
        const auto ls = run_low_storage(data, config.sim, config.book, space,
                                        config.low_storage_price_usd_per_kwh, opts);
        const auto base_rows = ls.base.report.rows();
        const auto low_rows = ls.low.report.rows();
        auto delta = low_rows;
        for (std::size_t i = 0; i < delta.size(); ++i) {
            delta[i].value = low_rows[i].value - base_rows[i].value;
        }
        write_file(out.dir() / "report.csv", [&](std::ostream& o) {
            write_report_csv(o, {base_rows, low_rows, delta}, {"base", "low-storage", "delta"});
        });
        out.trajectory(ls.low.optimization);
        out.trajectory(ls.base.optimization, "base");
        out.trace(ls.low.report.mix);
        return exit_code::ok;
    }
    if (scenario == "fuel-sensitivity") {
        const auto runs = run_fuel_sensitivity(data, config.sim, config.book, space,
                                               config.fuel_prices_usd_per_gj, opts);
        std::vector<std::vector<ReportRow>> cols;
        std::vector<std::string> names;
        for (const auto& r : runs) {
            cols.push_back(r.report.rows());
            names.push_back(runs.size() == 1 ? "value" : r.report.name);
        }
        write_file(out.dir() / "report.csv",
                   [&](std::ostream& o) { write_report_csv(o, cols, names); });
        out.trajectory(runs.front().optimization);
        if (runs.size() > 1) {
            for (const auto& r : runs) {
                out.trajectory(r.optimization, r.report.name);
            }
        }
        out.trace(runs.front().report.mix);
        return exit_code::ok;
    }
    throw Error(ErrorKind::Config, "config key 'scenario': unknown scenario '" + scenario + "'");
}

}  // namespace

AlignedDataset load_dataset(const DatasetConfig& config) {
    if (config.source == DatasetSource::Synthetic) {
        return synthesize_dataset(config.synthetic_seed, config.synthetic_hours,
                                  config.synthetic_droughts);
    }
    return align(load_series_file(config.demand_csv, SeriesKind::DemandGw, config.dt_hours),
                 load_series_file(config.wind_cf_csv, SeriesKind::CapacityFactor, config.dt_hours),
                 load_series_file(config.pv_cf_csv, SeriesKind::CapacityFactor, config.dt_hours));
}

int run(RunConfig config, Command command, std::ostream& log) {
    try {
        config.validate();
        return execute(config, command, log);
    } catch (const Error& e) {
        log << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
        return code_for(e.kind());
    } catch (const fs::filesystem_error& e) {
        log << "error (io): " << e.what() << '\n';
        return exit_code::data;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return exit_code::data;
    }
}

}  // namespace firmgrid
