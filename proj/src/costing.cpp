#include "firmgrid/costing.hpp"

#include "firmgrid/error.hpp"
#include "firmgrid/numfmt.hpp"

#include <cmath>
#include <string>

namespace firmgrid {

namespace {

constexpr double hours_per_year = 8760.0;
constexpr double kw_per_gw = 1e6;
constexpr double kwh_per_gwh = 1e6;
constexpr double mwh_per_twh = 1e6;

void require(bool ok, const std::string& what) {
    if (!ok) {
        throw Error(ErrorKind::InvalidArgument, what);
    }
}

bool cost_ok(double v) { return std::isfinite(v) && v >= 0.0; }

}  // namespace

void CostBook::validate() const {
    require(cost_ok(capex_wind_usd_per_kw), "capex_wind_usd_per_kw must be >= 0");
    require(cost_ok(capex_pv_usd_per_kw), "capex_pv_usd_per_kw must be >= 0");
    require(cost_ok(capex_dispatch_usd_per_kw), "capex_dispatch_usd_per_kw must be >= 0");
    require(cost_ok(capex_battery_usd_per_kwh), "capex_battery_usd_per_kwh must be >= 0");
    require(interest_rate > 0.0 && interest_rate < 1.0, "interest_rate must be in (0, 1)");
    require(life_years_wind >= 1, "life_years_wind must be >= 1");
    require(life_years_pv >= 1, "life_years_pv must be >= 1");
    require(life_years_dispatch >= 1, "life_years_dispatch must be >= 1");
    require(life_years_battery >= 1, "life_years_battery must be >= 1");
    require(cost_ok(fixed_om_wind_usd_per_kw_yr), "fixed_om_wind_usd_per_kw_yr must be >= 0");
    require(cost_ok(fixed_om_pv_usd_per_kw_yr), "fixed_om_pv_usd_per_kw_yr must be >= 0");
    require(cost_ok(fixed_om_battery_usd_per_kw_yr),
            "fixed_om_battery_usd_per_kw_yr must be >= 0");
    require(cost_ok(fixed_om_dispatch_usd_per_kw_yr),
            "fixed_om_dispatch_usd_per_kw_yr must be >= 0");
    require(cost_ok(fuel_price_usd_per_gj), "fuel_price_usd_per_gj must be >= 0");
    require(std::isfinite(heat_rate_gj_per_mwh) && heat_rate_gj_per_mwh > 0.0,
            "heat_rate_gj_per_mwh must be > 0");
}

double crf(double rate, int years) {
    if (!(rate > 0.0 && rate < 1.0) || years < 1) {
        throw Error(ErrorKind::InvalidArgument, "crf needs rate in (0, 1) and years >= 1, got " +
                                                    format_number(rate) + ", " +
                                                    std::to_string(years));
    }
    const double growth = std::pow(1.0 + rate, years);
    return rate * growth / (growth - 1.0);
}

double annualized_capital(const CapacityMix& mix, const CostBook& book) {
    const double r = book.interest_rate;
    return mix.wind_gw * kw_per_gw * book.capex_wind_usd_per_kw * crf(r, book.life_years_wind) +
           mix.pv_gw * kw_per_gw * book.capex_pv_usd_per_kw * crf(r, book.life_years_pv) +
           mix.dispatch_gw * kw_per_gw * book.capex_dispatch_usd_per_kw *
               crf(r, book.life_years_dispatch) +
           mix.battery_energy_gwh() * kwh_per_gwh * book.capex_battery_usd_per_kwh *
               crf(r, book.life_years_battery);
}

double fixed_om(const CapacityMix& mix, const CostBook& book) {
    return kw_per_gw * (mix.wind_gw * book.fixed_om_wind_usd_per_kw_yr +
                        mix.pv_gw * book.fixed_om_pv_usd_per_kw_yr +
                        mix.battery_power_gw * book.fixed_om_battery_usd_per_kw_yr +
                        mix.dispatch_gw * book.fixed_om_dispatch_usd_per_kw_yr);
}

double fuel_cost(double dispatch_energy_twh, const CostBook& book) {
    if (!(dispatch_energy_twh >= 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "dispatch energy must be >= 0");
    }
    return dispatch_energy_twh * mwh_per_twh * book.heat_rate_gj_per_mwh *
           book.fuel_price_usd_per_gj;
}

double dispatch_capacity_charge_usd_per_kw_yr(const CostBook& book) {
    return book.capex_dispatch_usd_per_kw * crf(book.interest_rate, book.life_years_dispatch) +
           book.fixed_om_dispatch_usd_per_kw_yr;
}

SystemCost system_cost(const CapacityMix& mix, const DispatchResult& result,
                       const CostBook& book) {
    book.validate();
    if (!(result.total_hours > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "system cost needs a positive simulated period");
    }
    // Energies are scaled to a year so that capital and energy share a basis;
    // the factor is exactly 1 for 8760 h of data.
    const double to_year = hours_per_year / result.total_hours;
    SystemCost cost;
    cost.served_energy_mwh =
        (result.demand_energy_twh - result.unserved_energy_twh) * mwh_per_twh * to_year;
    if (!(cost.served_energy_mwh > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "system cost needs positive served energy");
    }
    cost.annualized_capital_usd = annualized_capital(mix, book);
    cost.fixed_om_usd = fixed_om(mix, book);
    cost.fuel_usd = fuel_cost(result.dispatch_energy_twh * to_year, book);
    cost.total_usd = cost.annualized_capital_usd + cost.fixed_om_usd + cost.fuel_usd;
    cost.unit_cost_usd_per_mwh = cost.total_usd / cost.served_energy_mwh;
    cost.capacity_payment_usd_per_mwh = mix.dispatch_gw * kw_per_gw *
                                        dispatch_capacity_charge_usd_per_kw_yr(book) /
                                        cost.served_energy_mwh;
    return cost;
}

}  // namespace firmgrid
