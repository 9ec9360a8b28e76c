#include "firmgrid/scenarios.hpp"

#include "firmgrid/error.hpp"
#include "firmgrid/numfmt.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace firmgrid {

namespace {

constexpr const char* kPctPeakUnits = "Percent of Peak Gen. Capacity";

double pct(double num, double den) { return den > 0.0 ? 100.0 * num / den : 0.0; }

bool served_all(const DispatchResult& r) { return r.unserved_energy_twh == 0.0; }

}  // namespace

ScenarioReport make_report(std::string name, const DemandStats& demand, const CapacityMix& mix,
                           const DispatchResult& result, const std::optional<SystemCost>& cost) {
    ScenarioReport r;
    r.name = std::move(name);
    r.demand = demand;
    r.mix = mix;
    r.result = result;
    r.result.trace.reset();
    r.cost = cost;

    r.wind_cf_pct = 100.0 * result.wind_cf;
    r.pv_cf_pct = 100.0 * result.pv_cf;
    r.dispatch_cf_pct = 100.0 * result.dispatch_cf;
    r.wind_pct_of_peak = pct(mix.wind_gw, demand.peak_gw);
    r.pv_pct_of_peak = pct(mix.pv_gw, demand.peak_gw);
    r.dispatch_pct_of_peak = pct(mix.dispatch_gw, demand.peak_gw);
    r.dispatch_pct_of_average = pct(mix.dispatch_gw, demand.average_gw);
    r.percent_curtailed = pct(result.curtailed_twh, result.renewable_gen_twh);
    r.net_peak_gw = demand.peak_gw - mix.baseload_output_gw();
    r.dispatch_pct_of_net_peak = pct(mix.dispatch_gw, r.net_peak_gw);
    r.wind_pct_of_net_peak = pct(mix.wind_gw, r.net_peak_gw);
    r.pv_pct_of_net_peak = pct(mix.pv_gw, r.net_peak_gw);
    return r;
}

std::vector<ReportRow> ScenarioReport::rows() const {
    std::vector<ReportRow> rows{
        {"Annual Demand", demand.annual_energy_twh, "TWh"},
        {"Peak Rate", demand.peak_gw, "GW"},
        {"Average Rate", demand.average_gw, "GW"},
    };
    const bool baseload = mix.baseload_gw > 0.0;
    if (baseload) {
        rows.push_back({"Base load Gen.", mix.baseload_gw, "GW"});
        rows.push_back({"Base EAF", 100.0 * mix.baseload_eaf, "%"});
        rows.push_back({"Base Energy", result.baseload_energy_twh, "TWh"});
    }
    rows.insert(rows.end(), {
        {"Installed Wind", mix.wind_gw, "GW"},
        {"Wind Energy", result.wind_energy_twh, "TWh"},
        {"Wind CF", wind_cf_pct, "%"},
        {"Wind Percent of Peak Capacity", wind_pct_of_peak, kPctPeakUnits},
        {"Installed PV", mix.pv_gw, "GW"},
        {"PV Energy", result.pv_energy_twh, "TWh"},
        {"PV CF", pv_cf_pct, "%"},
        {"PV Percent of Peak Capacity", pv_pct_of_peak, kPctPeakUnits},
        {"Battery Capacity", mix.battery_power_gw, "GW"},
        {"Battery Hours", mix.battery_hours, "Hours"},
        {"Battery Energy", mix.battery_energy_gwh(), "GWh"},
        {"Installed Dispatch", mix.dispatch_gw, "GW"},
        {"Dispatch Energy", result.dispatch_energy_twh, "TWh"},
        {"Dispatch CF", dispatch_cf_pct, "%"},
        {"Percent of Peak demand", dispatch_pct_of_peak, "%"},
        {"Percent of Average demand", dispatch_pct_of_average, "%"},
    });
    if (baseload) {
        rows.push_back({"Percent of net Peak demand", dispatch_pct_of_net_peak, "% of net Peak"});
        rows.push_back({"Wind Percent of Peak Capacity minus net base", wind_pct_of_net_peak,
                        kPctPeakUnits});
        rows.push_back({"PV Percent of Peak Capacity minus net base", pv_pct_of_net_peak,
                        kPctPeakUnits});
    }
    rows.insert(rows.end(), {
        {"Renewable Gen", result.renewable_gen_twh, "TWh"},
        {"Curtailed Renew.", result.curtailed_twh, "TWh"},
        {"Percent Curtailed", percent_curtailed, "%"},
        {"Unserved Energy", result.unserved_energy_twh, "TWh"},
    });
    if (cost) {
        rows.insert(rows.end(), {
            {"Annualized Capital", cost->annualized_capital_usd, "USD/yr"},
            {"Fixed O&M", cost->fixed_om_usd, "USD/yr"},
            {"Fuel Cost", cost->fuel_usd, "USD/yr"},
            {"Total Cost", cost->total_usd, "USD/yr"},
            {"Unit Cost of Supply", cost->unit_cost_usd_per_mwh, "USD/MWh"},
            {"Capacity Payment", cost->capacity_payment_usd_per_mwh, "USD/MWh"},
        });
    }
    return rows;
}

ScenarioOutcome run_base(const AlignedDataset& data, const SimParams& params,
                         const CostBook& book, SearchSpace space, const OptimOptions& options) {
    space.baseload_gw = 0.0;
    space.baseload_eaf = 0.0;
    ScenarioOutcome out;
    out.optimization = optimize(space, data, params, book, options);
    const auto& o = out.optimization;
    out.report = make_report("base", demand_stats(data.demand()), o.best_mix, o.best_result,
                             o.best_cost);
    return out;
}

LowStorageOutcome run_low_storage(const AlignedDataset& data, const SimParams& params,
                                  const CostBook& book, const SearchSpace& space,
                                  double battery_price_usd_per_kwh, const OptimOptions& options) {
    if (!(battery_price_usd_per_kwh > 0.0) || !std::isfinite(battery_price_usd_per_kwh)) {
        throw Error(ErrorKind::InvalidArgument, "battery price must be > 0");
    }
    LowStorageOutcome out;
    out.base = run_base(data, params, book, space, options);
    CostBook cheap = book;
    cheap.capex_battery_usd_per_kwh = battery_price_usd_per_kwh;
    out.low = run_base(data, params, cheap, space, options);
    out.low.report.name = "low-storage";
    out.delta_dispatch_gw = out.low.report.mix.dispatch_gw - out.base.report.mix.dispatch_gw;
    out.delta_dispatch_energy_twh =
        out.low.report.result.dispatch_energy_twh - out.base.report.result.dispatch_energy_twh;
    return out;
}

namespace {

class PvOnlySearch {
public:
    PvOnlySearch(const AlignedDataset& data, const SimParams& params, double peak_gw, bool cyclic)
        : data_(data), params_(params), peak_gw_(peak_gw), cyclic_(cyclic) {}

    // Battery power that never binds for a given PV fleet.
    double power_bound(double pv_gw) const { return std::max(peak_gw_, pv_gw); }

    CapacityMix mix(double pv_gw, double power_gw, double energy_gwh) const {
        CapacityMix m;
        m.pv_gw = pv_gw;
        m.battery_power_gw = energy_gwh > 0.0 ? power_gw : 0.0;
        m.battery_hours = m.battery_power_gw > 0.0 ? energy_gwh / m.battery_power_gw : 0.0;
        return m;
    }

    // With cyclic SOC the run starts from the largest state of charge it ends
    // at or above. End SOC rises with start SOC at slope at most 1, so
    // end - start is nonincreasing and the largest such start is bracketed by
    // bisection. Serving all load is monotone in the start, so that start
    // decides feasibility.
    std::optional<SimParams> feasible_params(const CapacityMix& m) const {
        SimParams p = params_;
        const double cap = m.battery_energy_gwh();
        if (cyclic_) {
            p.initial_soc_fraction = cap > 0.0 ? 1.0 : 0.0;
        }
        auto r = simulate(m, data_, p);
        if (!served_all(r)) {
            return std::nullopt;
        }
        if (!cyclic_ || cap == 0.0 || r.final_soc_gwh >= cap) {
            return p;
        }
        double lo = 0.0;
        double hi = 1.0;
        while (hi - lo > 1e-12) {
            p.initial_soc_fraction = lo + (hi - lo) / 2.0;
            r = simulate(m, data_, p);
            (r.final_soc_gwh >= p.initial_soc_fraction * cap ? lo : hi) = p.initial_soc_fraction;
        }
        p.initial_soc_fraction = lo;
        return served_all(simulate(m, data_, p)) ? std::optional(p) : std::nullopt;
    }

    bool feasible(const CapacityMix& m) const { return feasible_params(m).has_value(); }

private:
    const AlignedDataset& data_;
    const SimParams& params_;
    double peak_gw_;
    bool cyclic_;
};

// Bisection keeping `hi` feasible; returns the final feasible bound.
template <typename Pred>
double bisect_down(double lo, double hi, double rel_tol, Pred feasible) {
    while (hi - lo > rel_tol * hi) {
        const double mid = lo + (hi - lo) / 2.0;
        if (mid <= lo || mid >= hi) {
            break;
        }
        (feasible(mid) ? hi : lo) = mid;
    }
    return hi;
}

}  // namespace

PvOnlyOutcome run_pv_only(const AlignedDataset& data, const SimParams& caller_params,
                          const CostBook& book, const PvOnlyOptions& options) {
    if (!(options.max_battery_hours >= 0.0) || !(options.rel_tolerance > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "pv-only options out of range");
    }
    caller_params.validate();
    const auto stats = demand_stats(data.demand());
    PvOnlyOutcome out;
    out.params = caller_params;
    if (stats.peak_gw == 0.0) {
        out.feasible = true;
        const CapacityMix empty;
        out.report = make_report("pv-only", stats, empty, simulate(empty, data, caller_params));
        return out;
    }

    const PvOnlySearch search(data, caller_params, stats.peak_gw, options.cyclic_soc);
    const double energy_bound = options.max_battery_hours * stats.peak_gw;
    auto pv_feasible = [&](double pv) {
        return search.feasible(search.mix(pv, search.power_bound(pv), energy_bound));
    };

    constexpr int max_doublings = 40;
    double pv_hi = stats.peak_gw;
    int doublings = 0;
    while (!pv_feasible(pv_hi)) {
        if (++doublings > max_doublings) {
            out.feasible = false;
            out.reason = "no PV fleet serves the load with at most " +
                         format_number(options.max_battery_hours) +
                         " h of peak demand in storage";
            return out;
        }
        pv_hi *= 2.0;
    }
    const double pv_lo = doublings == 0 ? 0.0 : pv_hi / 2.0;
    const double pv = pv_feasible(0.0) ? 0.0 : bisect_down(pv_lo, pv_hi, options.rel_tolerance, pv_feasible);

    const double power_max = search.power_bound(pv);
    double energy = 0.0;
    if (!search.feasible(search.mix(pv, power_max, 0.0))) {
        energy = bisect_down(0.0, energy_bound, options.rel_tolerance, [&](double e) {
            return search.feasible(search.mix(pv, power_max, e));
        });
    }
    double power = 0.0;
    if (energy > 0.0) {
        power = bisect_down(0.0, power_max, options.rel_tolerance, [&](double p) {
            return search.feasible(search.mix(pv, p, energy));
        });
    }

    const CapacityMix best = search.mix(pv, power, energy);
    const auto params = search.feasible_params(best);
    if (!params) {
        out.reason = "sized PV-only mix leaves load unserved";
        return out;
    }
    out.feasible = true;
    out.params = *params;
    const auto result = simulate(best, data, out.params);
    out.report = make_report("pv-only", stats, best, result, system_cost(best, result, book));
    return out;
}

std::vector<ReportRow> RigidityReport::rows() const {
    return {
        {"Annual Demand", baseline_demand_twh, "TWh"},
        {"Test Demand", test_demand_twh, "TWh"},
        {"Percent of Normal", 100.0 * failure_multiplier, "%"},
        {"Installed Dispatch", required_dispatch_gw, "GW"},
        {"Dispatch Energy", required_dispatch_energy_gwh, "GWh"},
        {"Percent of Average demand", percent_of_average, "%"},
    };
}

RigidityReport run_rigidity(const CapacityMix& mix, const AlignedDataset& data,
                            const SimParams& params, const RigidityOptions& options) {
    if (!(options.step > 0.0) || !(options.max_multiplier > 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "rigidity step must be > 0 and max multiplier > 1");
    }
    if (!served_all(simulate(mix, data, params))) {
        throw Error(ErrorKind::Infeasible, "mix already leaves load unserved at normal demand");
    }
    RigidityReport rep;
    rep.baseline_demand_twh = demand_stats(data.demand()).annual_energy_twh;
    for (int k = 1;; ++k) {
        const double m = 1.0 + k * options.step;
        if (m > options.max_multiplier + 1e-12) {
            throw Error(ErrorKind::InvalidArgument,
                        "mix still serves all load at " + format_number(options.max_multiplier) +
                            "x demand");
        }
        const auto scaled = scale_demand(data, m);
        if (served_all(simulate(mix, scaled, params))) {
            continue;
        }
        const auto stats = demand_stats(scaled.demand());
        CapacityMix with_dispatch = mix;
        with_dispatch.dispatch_gw = size_dispatch(mix, scaled, params);
        const auto res = simulate(with_dispatch, scaled, params);
        rep.failure_multiplier = m;
        rep.test_demand_twh = stats.annual_energy_twh;
        rep.required_dispatch_gw = with_dispatch.dispatch_gw;
        rep.required_dispatch_energy_gwh = res.dispatch_energy_twh * 1000.0;
        rep.percent_of_average = pct(with_dispatch.dispatch_gw, stats.average_gw);
        return rep;
    }
}

ScenarioOutcome run_residual_baseload(const AlignedDataset& data, const SimParams& params,
                                      const CostBook& book, SearchSpace space, double baseload_gw,
                                      double eaf, const OptimOptions& options) {
    if (!(baseload_gw >= 0.0) || !(eaf >= 0.0 && eaf <= 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "baseload_gw must be >= 0 and eaf in [0, 1]");
    }
    if (baseload_gw == 0.0) {
        return run_base(data, params, book, std::move(space), options);
    }
    space.baseload_gw = baseload_gw;
    space.baseload_eaf = eaf;
    ScenarioOutcome out;
    out.optimization = optimize(space, data, params, book, options);
    const auto& o = out.optimization;
    out.report = make_report("residual-baseload", demand_stats(data.demand()), o.best_mix,
                             o.best_result, o.best_cost);
    return out;
}

std::vector<ScenarioOutcome> run_fuel_sensitivity(const AlignedDataset& data,
                                                  const SimParams& params, const CostBook& book,
                                                  const SearchSpace& space,
                                                  const std::vector<double>& fuel_prices,
                                                  const OptimOptions& options) {
    if (fuel_prices.empty()) {
        throw Error(ErrorKind::InvalidArgument, "fuel price list is empty");
    }
    for (double p : fuel_prices) {
        if (!(p > 0.0) || !std::isfinite(p)) {
            throw Error(ErrorKind::InvalidArgument, "fuel prices must be > 0");
        }
    }
    std::vector<ScenarioOutcome> out;
    out.reserve(fuel_prices.size());
    for (double p : fuel_prices) {
        CostBook b = book;
        b.fuel_price_usd_per_gj = p;
        out.push_back(run_base(data, params, b, space, options));
        if (fuel_prices.size() > 1) {
            out.back().report.name = "fuel_" + format_number(p);
        }
    }
    return out;
}

void write_report_csv(std::ostream& out, const std::vector<std::vector<ReportRow>>& columns,
                      const std::vector<std::string>& column_names) {
    if (columns.empty() || columns.size() != column_names.size()) {
        throw Error(ErrorKind::InvalidArgument, "report needs one name per column");
    }
    const auto& first = columns.front();
    for (const auto& col : columns) {
        if (col.size() != first.size()) {
            throw Error(ErrorKind::InvalidArgument, "report columns have different rows");
        }
        for (std::size_t i = 0; i < col.size(); ++i) {
            if (col[i].label != first[i].label) {
                throw Error(ErrorKind::InvalidArgument, "report columns have different rows");
            }
        }
    }
    out << "label";
    for (const auto& n : column_names) {
        out << ',' << n;
    }
    out << ",units\n";
    for (std::size_t i = 0; i < first.size(); ++i) {
        out << first[i].label;
        for (const auto& col : columns) {
            out << ',' << format_number(col[i].value);
        }
        out << ',' << first[i].units << '\n';
    }
}

}  // namespace firmgrid
