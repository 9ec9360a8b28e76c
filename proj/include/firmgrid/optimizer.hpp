#pragma once

#include "firmgrid/costing.hpp"
#include "firmgrid/dispatch.hpp"
#include "firmgrid/profiles.hpp"

#include <cstddef>
#include <iosfwd>
#include <vector>

namespace firmgrid {

struct DimRange {
    double min = 0.0;
    double max = 0.0;
    double step = 1.0;
};

// Coarse battery duration rungs, in hours.
inline const std::vector<double> kDefaultBatteryHoursLadder{0, 1, 2, 4, 8, 12, 24, 36, 48};

struct SearchSpace {
    DimRange wind_gw;
    DimRange pv_gw;
    DimRange battery_power_gw;
    std::vector<double> battery_hours = kDefaultBatteryHoursLadder;  // ascending
    double baseload_gw = 0.0;
    double baseload_eaf = 0.0;

    void validate() const;

    /// Power ranges scaled to peak demand: wind up to 3x peak, PV up to 2x,
    /// battery power up to 1x, each with a coarse step of 10 % of peak.
    static SearchSpace scaled_to_peak(double peak_gw);
};

// Grid values for a range: min, min+step, ... and max itself.
std::vector<double> grid_points(const DimRange& range);

struct Evaluation {
    CapacityMix mix;
    DispatchResult result;
    SystemCost cost;
};

/// Sizes dispatch endogenously for the candidate, simulates, and prices it.
/// The candidate's dispatch_gw is ignored.
Evaluation evaluate(const CapacityMix& candidate, const AlignedDataset& data,
                    const SimParams& params, const CostBook& book);

// Strict order used to pick the incumbent: unit cost, then annualized
// capital, then total installed GW, then (wind, pv, battery power, hours).
bool better_than(const Evaluation& a, const Evaluation& b, const CostBook& book);

struct OptimOptions {
    double refine_tolerance_gw = 0.1;
    double refine_tolerance_hours = 0.5;
    unsigned threads = 0;  // 0: hardware concurrency
    std::size_t max_evaluations = 200000;
};

struct TrajectoryPoint {
    CapacityMix mix;
    double unit_cost_usd_per_mwh = 0.0;
};

struct OptimResult {
    CapacityMix best_mix;
    DispatchResult best_result;
    SystemCost best_cost;
    std::size_t evaluations = 0;
    std::vector<TrajectoryPoint> trajectory;  // successive incumbents
};

OptimResult optimize(const SearchSpace& space, const AlignedDataset& data,
                     const SimParams& params, const CostBook& book,
                     const OptimOptions& options = {});

// Trajectory CSV: step, wind_gw, pv_gw, battery_power_gw, battery_hours, dispatch_gw,
// unit_cost_usd_per_mwh
void write_trajectory_csv(std::ostream& out, const std::vector<TrajectoryPoint>& trajectory);

}  // namespace firmgrid
