#pragma once

// Test-only helpers and independent oracles. Nothing here calls into the
// dispatch or costing code it is used to check.

#include "firmgrid/dispatch.hpp"
#include "firmgrid/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace testsupport {

inline firmgrid::AlignedDataset make_dataset(std::vector<double> demand, std::vector<double> wind,
                                             std::vector<double> pv, double dt = 1.0) {
    using firmgrid::SeriesKind;
    using firmgrid::TimeSeries;
    return firmgrid::align(TimeSeries(std::move(demand), dt, SeriesKind::DemandGw, "demand"),
                           TimeSeries(std::move(wind), dt, SeriesKind::CapacityFactor, "wind_cf"),
                           TimeSeries(std::move(pv), dt, SeriesKind::CapacityFactor, "pv_cf"));
}

inline bool close_rel(double a, double b, double rel) {
    return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

// Long-double running sum; independent of the library's compensated sums.
inline long double sum_ld(const std::vector<double>& xs) {
    long double s = 0.0L;
    for (double x : xs) {
        s += x;
    }
    return s;
}

/// Lower bound on the dispatch capacity a zero-renewable window forces when
/// there is no baseload. The battery can enter the window holding at most
/// `battery_energy_gwh` and deliver at most `battery_power_gw`; once that energy
/// is spent, every later step in the window falls on dispatch. The earliest
/// possible depletion is found by letting the battery serve as much as it can
/// from the window's first step.
inline double drought_dispatch_lower_bound(const firmgrid::AlignedDataset& data,
                                           std::size_t begin, std::size_t end,
                                           double battery_power_gw, double battery_energy_gwh) {
    const double dt = data.dt_hours();
    double energy = battery_energy_gwh;
    double bound = 0.0;
    for (std::size_t t = begin; t < end; ++t) {
        const double d = data.demand()[t];
        const double from_battery = std::min({d, battery_power_gw, energy / dt});
        energy -= from_battery * dt;
        bound = std::max(bound, d - from_battery);
    }
    return bound;
}

/// Returns an empty string when every per-step identity and the battery
/// ledger hold to `tol`; otherwise a description of the first violation.
inline std::string check_invariants(const firmgrid::CapacityMix& mix,
                                    const firmgrid::SimParams& params,
                                    const firmgrid::AlignedDataset& data,
                                    const firmgrid::DispatchResult& r, double tol = 1e-9) {
    if (!r.trace) {
        return "no trace";
    }
    const double cap = mix.battery_power_gw * mix.battery_hours;
    const double dt = data.dt_hours();
    long double ledger = r.initial_soc_gwh;
    double prev_soc = r.initial_soc_gwh;
    for (std::size_t t = 0; t < r.trace->size(); ++t) {
        const auto& s = (*r.trace)[t];
        const std::string at = " at step " + std::to_string(t);
        const double served = s.baseload_gw + s.renewable_to_demand_gw + s.battery_discharge_gw +
                              s.dispatch_gw + s.unserved_gw;
        if (std::abs(served - data.demand()[t]) > tol) {
            return "balance" + at;
        }
        const double wind = mix.wind_gw * data.wind_cf()[t];
        const double pv = mix.pv_gw * data.pv_cf()[t];
        if (std::abs(wind + pv - (s.renewable_to_demand_gw + s.battery_charge_gw + s.curtailed_gw)) >
            tol) {
            return "renewable split" + at;
        }
        if (s.soc_gwh < -tol || s.soc_gwh > cap + tol) {
            return "soc bounds" + at;
        }
        const double flows[] = {s.baseload_gw,     s.renewable_to_demand_gw, s.battery_charge_gw,
                                s.battery_discharge_gw, s.curtailed_gw,     s.dispatch_gw,
                                s.unserved_gw,     s.dispatch_charge_gw};
        for (double f : flows) {
            if (f < -tol) {
                return "negative flow" + at;
            }
        }
        if (s.battery_charge_gw + s.dispatch_charge_gw > mix.battery_power_gw + tol ||
            s.battery_discharge_gw > mix.battery_power_gw + tol) {
            return "battery power limit" + at;
        }
        if (s.dispatch_gw + s.dispatch_charge_gw > mix.dispatch_gw + tol) {
            return "dispatch limit" + at;
        }
        const double step_change = params.round_trip_efficiency *
                                       (s.battery_charge_gw + s.dispatch_charge_gw) * dt -
                                   s.battery_discharge_gw * dt;
        if (std::abs(prev_soc + step_change - s.soc_gwh) > tol) {
            return "soc continuity" + at;
        }
        prev_soc = s.soc_gwh;
        ledger += step_change;
    }
    if (std::abs(static_cast<double>(ledger) - r.final_soc_gwh) > tol) {
        return "battery ledger";
    }
    if (r.peak_dispatch_gw > mix.dispatch_gw + tol) {
        return "peak dispatch above capacity";
    }
    return {};
}

/// Empty when `scaled` equals `lambda` times `base` for every energy total and
/// the ratio fields are unchanged, each to `rel` relative. Totals that are pure
/// rounding residue in both runs are compared against the run's demand energy.
inline std::string check_homogeneity(const firmgrid::DispatchResult& base,
                                     const firmgrid::DispatchResult& scaled, double lambda,
                                     double rel = 1e-9) {
    const double floor = 1e-12 * base.demand_energy_twh;
    auto same = [&](double expect, double got) {
        return std::abs(expect - got) <= rel * std::max(std::abs(expect), floor);
    };
    const std::pair<const char*, std::pair<double, double>> energies[] = {
        {"demand", {base.demand_energy_twh, scaled.demand_energy_twh}},
        {"wind", {base.wind_energy_twh, scaled.wind_energy_twh}},
        {"pv", {base.pv_energy_twh, scaled.pv_energy_twh}},
        {"baseload", {base.baseload_energy_twh, scaled.baseload_energy_twh}},
        {"charge", {base.battery_charge_twh, scaled.battery_charge_twh}},
        {"discharge", {base.battery_discharge_twh, scaled.battery_discharge_twh}},
        {"dispatch", {base.dispatch_energy_twh, scaled.dispatch_energy_twh}},
        {"unserved", {base.unserved_energy_twh, scaled.unserved_energy_twh}},
        {"curtailed", {base.curtailed_twh, scaled.curtailed_twh}},
        {"renewable", {base.renewable_gen_twh, scaled.renewable_gen_twh}},
        {"peak dispatch", {base.peak_dispatch_gw, scaled.peak_dispatch_gw}},
    };
    for (const auto& [name, v] : energies) {
        if (!same(lambda * v.first, v.second)) {
            return std::string(name) + " not homogeneous";
        }
    }
    const std::pair<const char*, std::pair<double, double>> ratios[] = {
        {"dispatch_cf", {base.dispatch_cf, scaled.dispatch_cf}},
        {"wind_cf", {base.wind_cf, scaled.wind_cf}},
        {"pv_cf", {base.pv_cf, scaled.pv_cf}},
        {"curtailed_fraction", {base.curtailed_fraction, scaled.curtailed_fraction}},
    };
    for (const auto& [name, v] : ratios) {
        if (std::abs(v.first - v.second) > rel * std::max(1.0, std::abs(v.first))) {
            return std::string(name) + " changed under scaling";
        }
    }
    return {};
}

inline firmgrid::CapacityMix scale_mix(firmgrid::CapacityMix mix, double lambda) {
    mix.wind_gw *= lambda;
    mix.pv_gw *= lambda;
    mix.battery_power_gw *= lambda;
    mix.dispatch_gw *= lambda;
    mix.baseload_gw *= lambda;
    return mix;
}

struct RandomCase {
    firmgrid::CapacityMix mix;
    firmgrid::SimParams params;
    std::uint64_t seed = 0;
    std::size_t hours = 0;
};

// Random mix scaled to the fixture's ~20-30 GW demand.
inline RandomCase random_case(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    RandomCase c;
    c.seed = rng();
    c.hours = 24 * (1 + rng() % 30);
    c.mix.wind_gw = 80.0 * u(rng);
    c.mix.pv_gw = 60.0 * u(rng);
    c.mix.battery_power_gw = u(rng) < 0.2 ? 0.0 : 30.0 * u(rng);
    c.mix.battery_hours = u(rng) < 0.1 ? 0.0 : 48.0 * u(rng);
    c.mix.dispatch_gw = 35.0 * u(rng);
    c.mix.baseload_gw = u(rng) < 0.5 ? 0.0 : 15.0 * u(rng);
    c.mix.baseload_eaf = u(rng);
    c.params.round_trip_efficiency = 0.5 + 0.5 * u(rng);
    c.params.initial_soc_fraction = u(rng) < 0.5 ? 0.0 : u(rng);
    c.params.battery_charges_from_dispatch = u(rng) < 0.2;
    return c;
}

}  // namespace testsupport
