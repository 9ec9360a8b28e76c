#pragma once

#include "firmgrid/costing.hpp"
#include "firmgrid/dispatch.hpp"
#include "firmgrid/optimizer.hpp"
#include "firmgrid/profiles.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace firmgrid {

enum class DatasetSource { Files, Synthetic };

struct DatasetConfig {
    DatasetSource source = DatasetSource::Files;
    std::string demand_csv;
    std::string wind_cf_csv;
    std::string pv_cf_csv;
    double dt_hours = 1.0;
    std::uint64_t synthetic_seed = 1;
    std::size_t synthetic_hours = 168;
    std::vector<DroughtWindow> synthetic_droughts;
};

// Unset search bounds are filled from peak demand when the run starts.
struct SearchConfig {
    std::optional<double> wind_gw_min, wind_gw_max, wind_gw_step;
    std::optional<double> pv_gw_min, pv_gw_max, pv_gw_step;
    std::optional<double> battery_power_gw_min, battery_power_gw_max, battery_power_gw_step;
    std::vector<double> battery_hours_ladder = kDefaultBatteryHoursLadder;
    OptimOptions options;
};

struct RunConfig {
    std::string scenario = "base";
    DatasetConfig dataset;
    SimParams sim;
    CostBook book;
    SearchConfig search;

    // fixed mix for `simulate` and for rigidity_mix: fixed
    CapacityMix mix;
    std::optional<double> fixed_dispatch_gw;

    double low_storage_price_usd_per_kwh = 10.0;
    std::vector<double> fuel_prices_usd_per_gj{20.0, 10.0};
    double residual_baseload_gw = 10.0;
    double residual_baseload_eaf = 0.7;
    double rigidity_step = 0.01;
    double rigidity_max_multiplier = 2.0;
    std::string rigidity_mix = "pv-only";
    double pv_only_max_battery_hours = 48.0;
    bool pv_only_cyclic_soc = true;

    std::string output_dir = "out";
    bool write_trace = false;

    void validate() const;
};

inline const std::vector<std::string> kScenarioNames{
    "base", "low-storage", "pv-only", "rigidity", "residual-baseload", "fuel-sensitivity"};

/// Parses flat `key: value` lines; `#` starts a comment. Unknown, duplicate
/// or malformed keys are errors naming the key.
RunConfig parse_config(std::string_view text);

RunConfig load_config_file(const std::filesystem::path& path);

// Makes dataset paths absolute against base_dir and checks that they exist.
void resolve_dataset_paths(RunConfig& config, const std::filesystem::path& base_dir);

// Fills unset search bounds from the peak demand of the loaded data.
void resolve_search(RunConfig& config, double peak_gw);

SearchSpace search_space(const RunConfig& config);

/// Every key with its current value, in parse_config's format.
void write_manifest(std::ostream& out, const RunConfig& config);

std::vector<std::string> config_keys();

}  // namespace firmgrid
