#pragma once

#include "firmgrid/costing.hpp"
#include "firmgrid/dispatch.hpp"
#include "firmgrid/optimizer.hpp"
#include "firmgrid/profiles.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace firmgrid {

struct ReportRow {
    std::string label;
    double value = 0.0;
    std::string units;
};

/// Capacity, energy and utilisation summary for one mix on one dataset.
/// Percent fields are derived in make_report and never stored independently
/// of their operands.
struct ScenarioReport {
    std::string name;
    DemandStats demand;
    CapacityMix mix;
    DispatchResult result;  // trace dropped
    std::optional<SystemCost> cost;

    double wind_cf_pct = 0.0;
    double pv_cf_pct = 0.0;
    double dispatch_cf_pct = 0.0;
    double wind_pct_of_peak = 0.0;
    double pv_pct_of_peak = 0.0;
    double dispatch_pct_of_peak = 0.0;
    double dispatch_pct_of_average = 0.0;
    double percent_curtailed = 0.0;
    // Only meaningful with residual baseload; net peak = peak - baseload output.
    double net_peak_gw = 0.0;
    double dispatch_pct_of_net_peak = 0.0;
    double wind_pct_of_net_peak = 0.0;
    double pv_pct_of_net_peak = 0.0;

    std::vector<ReportRow> rows() const;
};

ScenarioReport make_report(std::string name, const DemandStats& demand, const CapacityMix& mix,
                           const DispatchResult& result,
                           const std::optional<SystemCost>& cost = std::nullopt);

struct ScenarioOutcome {
    ScenarioReport report;
    OptimResult optimization;
};

ScenarioOutcome run_base(const AlignedDataset& data, const SimParams& params,
                         const CostBook& book, SearchSpace space,
                         const OptimOptions& options = {});

struct LowStorageOutcome {
    ScenarioOutcome base;
    ScenarioOutcome low;
    double delta_dispatch_gw = 0.0;
    double delta_dispatch_energy_twh = 0.0;
};

LowStorageOutcome run_low_storage(const AlignedDataset& data, const SimParams& params,
                                  const CostBook& book, const SearchSpace& space,
                                  double battery_price_usd_per_kwh,
                                  const OptimOptions& options = {});

struct PvOnlyOptions {
    // Battery energy may not exceed this many hours of peak demand.
    double max_battery_hours = 48.0;
    double rel_tolerance = 1e-6;
    // Start each run from the largest state of charge it returns to by the
    // end of the data, instead of the caller's initial SOC.
    bool cyclic_soc = true;
};

struct PvOnlyOutcome {
    bool feasible = false;
    std::string reason;  // set when infeasible
    std::optional<ScenarioReport> report;
    SimParams params;  // as simulated (cyclic SOC resolved), for follow-on runs such as rigidity
};

/// Smallest PV fleet that carries the load with batteries alone, then the
/// smallest battery energy and power at that PV.
PvOnlyOutcome run_pv_only(const AlignedDataset& data, const SimParams& params,
                          const CostBook& book, const PvOnlyOptions& options = {});

struct RigidityReport {
    double baseline_demand_twh = 0.0;
    double test_demand_twh = 0.0;
    double failure_multiplier = 0.0;
    double required_dispatch_gw = 0.0;
    double required_dispatch_energy_gwh = 0.0;
    double percent_of_average = 0.0;  // of the test demand's average

    std::vector<ReportRow> rows() const;
};

struct RigidityOptions {
    double step = 0.01;
    double max_multiplier = 2.0;
};

/// Raises demand in fixed increments until the mix leaves load unserved.
RigidityReport run_rigidity(const CapacityMix& mix, const AlignedDataset& data,
                            const SimParams& params, const RigidityOptions& options = {});

ScenarioOutcome run_residual_baseload(const AlignedDataset& data, const SimParams& params,
                                      const CostBook& book, SearchSpace space,
                                      double baseload_gw, double eaf,
                                      const OptimOptions& options = {});

std::vector<ScenarioOutcome> run_fuel_sensitivity(const AlignedDataset& data,
                                                  const SimParams& params, const CostBook& book,
                                                  const SearchSpace& space,
                                                  const std::vector<double>& fuel_prices,
                                                  const OptimOptions& options = {});

/// Report CSV: label, one value column per report, units. A single report
/// gets the value column "value"; otherwise each column is named after its report.
void write_report_csv(std::ostream& out, const std::vector<std::vector<ReportRow>>& columns,
                      const std::vector<std::string>& column_names);

}  // namespace firmgrid
