#pragma once

#include "firmgrid/profiles.hpp"

#include <iosfwd>
#include <optional>
#include <vector>

namespace firmgrid {

/// Installed capacities. Battery energy capacity is power x hours.
struct CapacityMix {
    double wind_gw = 0.0;
    double pv_gw = 0.0;
    double battery_power_gw = 0.0;
    double battery_hours = 0.0;
    double dispatch_gw = 0.0;
    double baseload_gw = 0.0;
    double baseload_eaf = 0.0;

    double battery_energy_gwh() const noexcept { return battery_power_gw * battery_hours; }
    double baseload_output_gw() const noexcept { return baseload_gw * baseload_eaf; }

    void validate() const;

    friend bool operator==(const CapacityMix&, const CapacityMix&) = default;
};

struct SimParams {
    double round_trip_efficiency = 0.85;
    double initial_soc_fraction = 0.0;
    // When set, dispatch capacity left idle after serving demand tops up the battery.
    bool battery_charges_from_dispatch = false;

    void validate() const;
};

/// Flows for one step, all in GW except soc_gwh (state at the end of the step).
struct StepRecord {
    double demand_gw = 0.0;
    double baseload_gw = 0.0;
    double renewable_to_demand_gw = 0.0;
    double battery_charge_gw = 0.0;  // drawn from renewable surplus
    double battery_discharge_gw = 0.0;
    double curtailed_gw = 0.0;
    double dispatch_gw = 0.0;  // dispatch serving demand
    double dispatch_charge_gw = 0.0;  // dispatch into the battery; zero unless enabled
    double unserved_gw = 0.0;
    double soc_gwh = 0.0;
    double wind_gen_gw = 0.0;
    double pv_gen_gw = 0.0;
};

struct DispatchResult {
    double demand_energy_twh = 0.0;
    double wind_energy_twh = 0.0;
    double pv_energy_twh = 0.0;
    double baseload_energy_twh = 0.0;
    double battery_charge_twh = 0.0;  // energy drawn in, before losses
    double battery_discharge_twh = 0.0;
    double dispatch_energy_twh = 0.0;  // includes any dispatch-to-battery energy
    double unserved_energy_twh = 0.0;
    double curtailed_twh = 0.0;
    double renewable_gen_twh = 0.0;
    double peak_dispatch_gw = 0.0;
    double dispatch_cf = 0.0;
    double wind_cf = 0.0;
    double pv_cf = 0.0;
    double curtailed_fraction = 0.0;
    double initial_soc_gwh = 0.0;
    double final_soc_gwh = 0.0;
    double total_hours = 0.0;
    std::optional<std::vector<StepRecord>> trace;
};

/// One greedy merit-order pass: baseload, renewables, battery, dispatch,
/// then unserved. Infeasibility shows up as unserved energy, not an error.
DispatchResult simulate(const CapacityMix& mix, const AlignedDataset& data,
                        const SimParams& params, bool keep_trace = false);

/// Smallest dispatch capacity that leaves no unserved energy: the peak
/// residual deficit after baseload, renewables and battery.
double size_dispatch(const CapacityMix& mix_without_dispatch, const AlignedDataset& data,
                     const SimParams& params);

AlignedDataset scale_demand(const AlignedDataset& data, double multiplier);

// Trace CSV: step, demand_gw, baseload_gw, renewable_to_demand_gw, battery_charge_gw,
// battery_discharge_gw, curtailed_gw, dispatch_gw, unserved_gw, soc_gwh
void write_trace_csv(std::ostream& out, const std::vector<StepRecord>& trace);

}  // namespace firmgrid
