// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "firmgrid/app.hpp"
#include "firmgrid/config.hpp"
#include "firmgrid/costing.hpp"
#include "firmgrid/dispatch.hpp"
#include "firmgrid/optimizer.hpp"
#include "firmgrid/scenarios.hpp"
#include "support.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>

using namespace firmgrid;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double x, int digits = 6) {
    std::ostringstream s;
    s << std::setprecision(digits) << x;
    return s.str();
}

Outcome amortization() {
    const double per_kw = crf(0.08, 30) * 800.0;
    const bool ok = std::abs(per_kw - 71.06) < 0.005 && std::abs(per_kw - 71.0) <= 0.1;
    return {ok, "crf(0.08,30) x 800 = " + fmt(per_kw) + " USD/kW/yr (published 71)"};
}

Outcome capacity_payment() {
    CostBook book;
    book.fixed_om_dispatch_usd_per_kw_yr = 40.0;
    CapacityMix mix;
    mix.dispatch_gw = 29.0;
    DispatchResult served;
    served.total_hours = 8760.0;
    served.demand_energy_twh = 231.0;
    const double per_kw = dispatch_capacity_charge_usd_per_kw_yr(book);
    const double adder = system_cost(mix, served, book).capacity_payment_usd_per_mwh;
    const bool ok = std::abs(per_kw - 111.0) <= 0.5 && std::abs(adder - 14.0) <= 0.5 &&
                    std::abs(adder - 13.9) < 0.05;
    return {ok, "per-kW charge " + fmt(per_kw) + " USD/yr (published 111), adder " + fmt(adder) +
                    " USD/MWh (published 14)"};
}

Outcome fuel() {
    const CostBook book;
    const double one_mwh = fuel_cost(1e-6, book);
    const bool ok = one_mwh == 200.0 &&
                    book.fuel_price_usd_per_gj * book.heat_rate_gj_per_mwh == 200.0;
    return {ok, "20 USD/GJ x 10 GJ/MWh -> " + fmt(one_mwh, 17) + " USD/MWh"};
}

Outcome baseload_energy() {
    const auto year = synthesize_dataset(1, 8760);
    CapacityMix mix;
    mix.baseload_gw = 10.0;
    mix.baseload_eaf = 0.70;
    mix.dispatch_gw = size_dispatch(mix, year, SimParams{});
    const double twh = simulate(mix, year, SimParams{}).baseload_energy_twh;
    const bool ok = std::abs(twh - 61.32) < 1e-9 && std::abs(twh - 61.0) <= 0.5;
    return {ok, "10 GW x 0.70 x 8760 h = " + fmt(twh, 10) + " TWh (published 61)"};
}

Outcome dispatch_oracle() {
    const auto data =
        testsupport::make_dataset({10, 10, 10, 10}, {1.0, 0.0, 0.5, 0.0}, {0, 0, 0, 0});
    CapacityMix mix;
    mix.wind_gw = 20;
    mix.battery_power_gw = 5;
    mix.battery_hours = 1;
    mix.dispatch_gw = 10;
    const auto r = simulate(mix, data, SimParams{}, true);
    double dispatch_gwh = 0.0;
    double curtailed_gwh = 0.0;
    for (const auto& s : *r.trace) {
        dispatch_gwh += s.dispatch_gw;
        curtailed_gwh += s.curtailed_gw;
    }
    const bool ok = dispatch_gwh == 15.75 && curtailed_gwh == 5.0 && r.peak_dispatch_gw == 10.0 &&
                    r.final_soc_gwh == 0.0 && r.unserved_energy_twh == 0.0 &&
                    testsupport::close_rel(r.dispatch_energy_twh, 0.01575, 1e-14) &&
                    testsupport::close_rel(r.curtailed_twh, 0.005, 1e-14);
    return {ok, "dispatch " + fmt(dispatch_gwh) + " GWh, curtailed " + fmt(curtailed_gwh) +
                    " GWh, peak " + fmt(r.peak_dispatch_gw) + " GW, final SOC " +
                    fmt(r.final_soc_gwh) + " GWh"};
}

Outcome balance_invariants() {
    std::mt19937_64 rng(20240601);
    int invariant_failures = 0;
    int homogeneity_failures = 0;
    std::string first;
    for (int trial = 0; trial < 1000; ++trial) {
        auto c = testsupport::random_case(rng);
        const auto data = synthesize_dataset(c.seed, c.hours);
        const auto r = simulate(c.mix, data, c.params, true);
        if (const auto why = testsupport::check_invariants(c.mix, c.params, data, r); !why.empty()) {
            ++invariant_failures;
            if (first.empty()) {
                first = why + " in trial " + std::to_string(trial);
            }
        }
        c.params.battery_charges_from_dispatch = false;
        const auto base = simulate(c.mix, data, c.params);
        for (double lambda : {0.5, 2.0, 10.0}) {
            const auto scaled = simulate(testsupport::scale_mix(c.mix, lambda),
                                         scale_demand(data, lambda), c.params);
            if (const auto why = testsupport::check_homogeneity(base, scaled, lambda);
                !why.empty()) {
                ++homogeneity_failures;
                if (first.empty()) {
                    first = why + " in trial " + std::to_string(trial);
                }
            }
        }
    }
    std::string detail = "1000 simulations: " + std::to_string(invariant_failures) +
                         " balance/ledger failures, " + std::to_string(homogeneity_failures) +
                         " homogeneity failures (3000 scalings)";
    if (!first.empty()) {
        detail += "; first: " + first;
    }
    return {invariant_failures == 0 && homogeneity_failures == 0, detail};
}

Outcome endogenous_sizing() {
    std::mt19937_64 rng(77);
    int failures = 0;
    int with_deficit = 0;
    for (int trial = 0; trial < 100; ++trial) {
        auto c = testsupport::random_case(rng);
        c.params.battery_charges_from_dispatch = false;
        const auto data = synthesize_dataset(c.seed, c.hours);
        c.mix.dispatch_gw = size_dispatch(c.mix, data, c.params);
        if (simulate(c.mix, data, c.params).unserved_energy_twh != 0.0) {
            ++failures;
        }
        if (c.mix.dispatch_gw > 0.0) {
            ++with_deficit;
            c.mix.dispatch_gw = std::max(0.0, c.mix.dispatch_gw - 0.01);
            if (!(simulate(c.mix, data, c.params).unserved_energy_twh > 0.0)) {
                ++failures;
            }
        }
    }
    return {failures == 0, "100 fixtures (" + std::to_string(with_deficit) +
                               " with a deficit): " + std::to_string(failures) + " failures"};
}

Outcome optimizer_vs_brute_force() {
    const DroughtWindow window{60, 100};
    const auto data = synthesize_dataset(2024, 168, std::span(&window, 1));
    const double peak = demand_stats(data.demand()).peak_gw;
    SearchSpace space;
    space.wind_gw = {0.0, 2.0 * peak, 0.5 * peak};
    space.pv_gw = {0.0, 2.0 * peak, 0.5 * peak};
    space.battery_power_gw = {0.0, peak, 0.25 * peak};
    space.battery_hours = {0, 4, 8, 12, 24};
    const SimParams params;
    const CostBook book;

    double brute = std::numeric_limits<double>::infinity();
    std::size_t points = 0;
    for (double w : grid_points(space.wind_gw)) {
        for (double p : grid_points(space.pv_gw)) {
            for (double b : grid_points(space.battery_power_gw)) {
                for (double h : space.battery_hours) {
                    CapacityMix m;
                    m.wind_gw = w;
                    m.pv_gw = p;
                    m.battery_power_gw = b;
                    m.battery_hours = h;
                    m.dispatch_gw = size_dispatch(m, data, params);
                    brute = std::min(
                        brute, system_cost(m, simulate(m, data, params), book).unit_cost_usd_per_mwh);
                    ++points;
                }
            }
        }
    }
    const auto r = optimize(space, data, params, book);
    const double best = r.best_cost.unit_cost_usd_per_mwh;
    return {points == 625 && best <= brute,
            "optimize " + fmt(best, 10) + " vs enumeration minimum " + fmt(brute, 10) +
                " USD/MWh over " + std::to_string(points) + " grid points"};
}

Outcome low_storage_headline() {
    const DroughtWindow window{150, 222};  // 72 h of zero wind and PV
    const auto data = synthesize_dataset(9, 24 * 14, std::span(&window, 1));
    const auto space = SearchSpace::scaled_to_peak(demand_stats(data.demand()).peak_gw);
    double window_peak = 0.0;
    for (std::size_t t = window.begin_hour; t < window.end_hour; ++t) {
        window_peak = std::max(window_peak, data.demand()[t]);
    }
    std::vector<double> dispatch_gw;
    std::vector<double> dispatch_twh;
    bool covers_window = true;
    for (double price : {200.0, 50.0, 10.0}) {
        CostBook book;
        book.capex_battery_usd_per_kwh = price;
        const auto out = run_base(data, SimParams{}, book, space);
        dispatch_gw.push_back(out.report.mix.dispatch_gw);
        dispatch_twh.push_back(out.report.result.dispatch_energy_twh);
        const auto& m = out.report.mix;
        covers_window = covers_window &&
                        m.dispatch_gw >= testsupport::drought_dispatch_lower_bound(
                                             data, window.begin_hour, window.end_hour,
                                             m.battery_power_gw, m.battery_energy_gwh());
    }
    const auto [lo, hi] = std::minmax_element(dispatch_gw.begin(), dispatch_gw.end());
    const double spread = *hi - *lo;
    const bool steady = spread <= space.battery_power_gw.step + 1e-9;
    const bool energy_falls = dispatch_twh[1] <= dispatch_twh[0] && dispatch_twh[2] <= dispatch_twh[1];
    std::string detail = "installed dispatch at 200/50/10 USD/kWh: " + fmt(dispatch_gw[0]) + "/" +
                         fmt(dispatch_gw[1]) + "/" + fmt(dispatch_gw[2]) + " GW (spread " +
                         fmt(spread) + ", step " + fmt(space.battery_power_gw.step) +
                         "); dispatch energy " + fmt(dispatch_twh[0]) + "/" + fmt(dispatch_twh[1]) +
                         "/" + fmt(dispatch_twh[2]) + " TWh; drought-window peak " +
                         fmt(window_peak) + " GW";
    return {steady && energy_falls && covers_window, detail};
}

Outcome rigidity() {
    const auto data = synthesize_dataset(5, 24 * 14);
    const auto pv = run_pv_only(data, SimParams{}, CostBook{});
    if (!pv.feasible) {
        return {false, "PV-only sizing infeasible: " + pv.reason};
    }
    const auto rep = run_rigidity(pv.report->mix, data, pv.params, {0.01, 2.0});
    const bool fails_at = simulate(pv.report->mix, scale_demand(data, rep.failure_multiplier),
                                   pv.params)
                              .unserved_energy_twh > 0.0;
    const bool ok = fails_at && rep.failure_multiplier > 1.0 &&
                    rep.failure_multiplier <= 1.02 + 1e-12 && rep.required_dispatch_gw > 0.0;
    return {ok, "PV " + fmt(pv.report->pv_pct_of_peak) + " % of peak, battery " +
                    fmt(pv.report->mix.battery_hours) + " h; fails at " +
                    fmt(100.0 * rep.failure_multiplier) + " % of normal demand, needing " +
                    fmt(rep.required_dispatch_gw) + " GW dispatch"};
}

// Every percent row must equal the quotient of its operands, bit for bit.
int identity_violations(const ScenarioReport& r) {
    std::map<std::string, double> rows;
    for (const auto& row : r.rows()) {
        rows.emplace(row.label, row.value);
    }
    const double peak = r.demand.peak_gw;
    int bad = 0;
    auto expect = [&](const char* label, double value) {
        if (rows.count(label) && rows.at(label) != value) {
            ++bad;
        }
    };
    expect("Wind Percent of Peak Capacity", 100.0 * r.mix.wind_gw / peak);
    expect("PV Percent of Peak Capacity", 100.0 * r.mix.pv_gw / peak);
    expect("Percent of Peak demand", 100.0 * r.mix.dispatch_gw / peak);
    expect("Percent of Average demand", 100.0 * r.mix.dispatch_gw / r.demand.average_gw);
    expect("Wind CF", 100.0 * r.result.wind_cf);
    expect("PV CF", 100.0 * r.result.pv_cf);
    expect("Dispatch CF", 100.0 * r.result.dispatch_cf);
    if (r.result.renewable_gen_twh > 0.0) {
        expect("Percent Curtailed", 100.0 * r.result.curtailed_twh / r.result.renewable_gen_twh);
    }
    expect("Battery Energy", r.mix.battery_power_gw * r.mix.battery_hours);
    if (r.mix.baseload_gw > 0.0) {
        const double net = peak - r.mix.baseload_gw * r.mix.baseload_eaf;
        expect("Percent of net Peak demand", 100.0 * r.mix.dispatch_gw / net);
        expect("Wind Percent of Peak Capacity minus net base", 100.0 * r.mix.wind_gw / net);
        expect("PV Percent of Peak Capacity minus net base", 100.0 * r.mix.pv_gw / net);
    }
    return bad;
}

Outcome report_identities() {
    const DemandStats sa{34.0, 231000.0 / 8760.0, 231.0};
    CapacityMix published;
    published.wind_gw = 64;
    published.pv_gw = 24;
    published.dispatch_gw = 29;
    const auto row = make_report("sa", sa, published, DispatchResult{});
    const bool published_ok = std::abs(row.wind_pct_of_peak - 188.0) <= 2.0 &&
                              std::abs(row.pv_pct_of_peak - 70.0) <= 2.0 &&
                              std::abs(row.dispatch_pct_of_peak - 84.0) <= 2.0 &&
                              std::abs(row.dispatch_pct_of_average - 109.0) <= 2.0;

    const auto data = synthesize_dataset(12, 24 * 7, std::vector<DroughtWindow>{{96, 144}});
    const auto space = SearchSpace::scaled_to_peak(demand_stats(data.demand()).peak_gw);
    std::vector<ScenarioReport> reports{row};
    reports.push_back(run_base(data, SimParams{}, CostBook{}, space).report);
    reports.push_back(
        run_residual_baseload(data, SimParams{}, CostBook{}, space, 10.0, 0.7).report);
    reports.push_back(run_low_storage(data, SimParams{}, CostBook{}, space, 10.0).low.report);
    for (auto& r : run_fuel_sensitivity(data, SimParams{}, CostBook{}, space, {20.0, 10.0})) {
        reports.push_back(r.report);
    }
    const auto clear = synthesize_dataset(13, 24 * 7);
    const auto pv = run_pv_only(clear, SimParams{}, CostBook{});
    if (pv.feasible) {
        reports.push_back(*pv.report);
    }
    int bad = 0;
    for (const auto& r : reports) {
        bad += identity_violations(r);
    }
    return {published_ok && bad == 0 && pv.feasible,
            "published rows 188/70/84/109 -> " + fmt(row.wind_pct_of_peak, 4) + "/" +
                fmt(row.pv_pct_of_peak, 3) + "/" + fmt(row.dispatch_pct_of_peak, 3) + "/" +
                fmt(row.dispatch_pct_of_average, 4) + "; " + std::to_string(reports.size()) +
                " reports, " + std::to_string(bad) + " identity violations"};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome determinism() {
    namespace fs = std::filesystem;
    const auto root = fs::temp_directory_path() / "firmgrid_acceptance_determinism";
    fs::remove_all(root);
    const std::string text =
        "dataset_source: synthetic\nsynthetic_seed: 17\nsynthetic_hours: 168\n"
        "synthetic_droughts: 72-120\nscenario: low-storage\n";
    bool ok = true;
    std::string detail;
    for (const char* scenario : {"base", "low-storage", "fuel-sensitivity"}) {
        std::string outputs[2];
        std::string trajectories[2];
        for (int run_no = 0; run_no < 2; ++run_no) {
            auto config = parse_config(text);
            config.scenario = scenario;
            config.output_dir = (root / (std::string(scenario) + std::to_string(run_no))).string();
            std::ostringstream log;
            if (run(config, Command::Scenario, log) != exit_code::ok) {
                return {false, std::string(scenario) + " run failed: " + log.str()};
            }
            outputs[run_no] = slurp(fs::path(config.output_dir) / "report.csv");
            trajectories[run_no] = slurp(fs::path(config.output_dir) / "trajectory.csv");
        }
        const bool same = !outputs[0].empty() && outputs[0] == outputs[1] &&
                          !trajectories[0].empty() && trajectories[0] == trajectories[1];
        ok = ok && same;
        detail += std::string(detail.empty() ? "" : ", ") + scenario + (same ? " identical" : " DIFFER");
    }
    fs::remove_all(root);
    return {ok, "report.csv and trajectory.csv across two runs: " + detail};
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"amortization arithmetic", amortization},
        {"capacity payment", capacity_payment},
        {"fuel variable cost", fuel},
        {"baseload energy", baseload_energy},
        {"dispatch oracle", dispatch_oracle},
        {"balance invariants", balance_invariants},
        {"endogenous sizing", endogenous_sizing},
        {"optimizer vs brute force", optimizer_vs_brute_force},
        {"low-storage headline property", low_storage_headline},
        {"rigidity property", rigidity},
        {"report identities", report_identities},
        {"determinism", determinism},
    };
    int failed = 0;
    int n = 0;
    for (const auto& [name, check] : criteria) {
        ++n;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failed += o.pass ? 0 : 1;
        std::cout << (o.pass ? "PASS" : "FAIL") << " AC" << n << " " << name << " [" << fmt(secs, 3)
                  << " s]: " << o.detail << std::endl;
    }
    std::cout << (n - failed) << "/" << n << " acceptance criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
}
