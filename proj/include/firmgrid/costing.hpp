#pragma once

#include "firmgrid/dispatch.hpp"

namespace firmgrid {

/// Cost assumptions. Capital per kW of power, except the battery which is
/// priced per kWh of energy capacity. Fixed O&M is per kW of power for every
/// technology. Baseload is treated as sunk legacy plant and carries no cost.
struct CostBook {
    double capex_wind_usd_per_kw = 1200.0;
    double capex_pv_usd_per_kw = 1000.0;
    double capex_dispatch_usd_per_kw = 800.0;
    double capex_battery_usd_per_kwh = 200.0;
    double interest_rate = 0.08;
    int life_years_wind = 30;
    int life_years_pv = 30;
    int life_years_dispatch = 30;
    int life_years_battery = 15;
    double fixed_om_wind_usd_per_kw_yr = 0.0;
    double fixed_om_pv_usd_per_kw_yr = 0.0;
    double fixed_om_battery_usd_per_kw_yr = 0.0;
    double fixed_om_dispatch_usd_per_kw_yr = 8.0;
    double fuel_price_usd_per_gj = 20.0;
    double heat_rate_gj_per_mwh = 10.0;

    void validate() const;
};

// Per-year figures. Fuel and served energy from a dataset shorter or longer
// than a year are scaled by 8760 h / simulated hours.
struct SystemCost {
    double annualized_capital_usd = 0.0;
    double fixed_om_usd = 0.0;
    double fuel_usd = 0.0;
    double total_usd = 0.0;
    double served_energy_mwh = 0.0;
    double unit_cost_usd_per_mwh = 0.0;
    double capacity_payment_usd_per_mwh = 0.0;
};

/// Capital recovery factor: r(1+r)^n / ((1+r)^n - 1).
double crf(double rate, int years);

double annualized_capital(const CapacityMix& mix, const CostBook& book);
double fixed_om(const CapacityMix& mix, const CostBook& book);
double fuel_cost(double dispatch_energy_twh, const CostBook& book);

// Annual fixed charge a firm dispatchable kW must recover: amortized capital plus fixed O&M.
double dispatch_capacity_charge_usd_per_kw_yr(const CostBook& book);

/// Throws if the result covers no time or served no energy.
SystemCost system_cost(const CapacityMix& mix, const DispatchResult& result, const CostBook& book);

}  // namespace firmgrid
