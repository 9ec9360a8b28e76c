#include "firmgrid/dispatch.hpp"

#include "firmgrid/error.hpp"
#include "firmgrid/numfmt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

namespace firmgrid {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) {
        throw Error(ErrorKind::InvalidArgument, what);
    }
}

bool nonnegative(double v) { return std::isfinite(v) && v >= 0.0; }

// Neumaier summation; yearly totals add ~10^4 terms.
class Accumulator {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            carry_ += (sum_ - t) + x;
        } else {
            carry_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

double ratio_or_zero(double num, double den) { return den > 0.0 ? num / den : 0.0; }

struct PassOptions {
    double dispatch_limit_gw;
    bool charge_from_dispatch;
    bool keep_trace;
};

DispatchResult run_pass(const CapacityMix& mix, const AlignedDataset& data,
                        const SimParams& params, const PassOptions& opt) {
    const double dt = data.dt_hours();
    const double eta = params.round_trip_efficiency;
    const double capacity = mix.battery_energy_gwh();
    const double power = mix.battery_power_gw;
    const double baseload = mix.baseload_output_gw();
    const auto demand = data.demand().values();
    const auto wind_cf = data.wind_cf().values();
    const auto pv_cf = data.pv_cf().values();

    DispatchResult res;
    res.total_hours = data.total_hours();
    res.initial_soc_gwh = params.initial_soc_fraction * capacity;
    if (opt.keep_trace) {
        res.trace.emplace();
        res.trace->reserve(data.steps());
    }

    Accumulator demand_e, wind_e, pv_e, base_e, charge_e, discharge_e, dispatch_e, unserved_e,
        curtailed_e;
    double soc = res.initial_soc_gwh;
    double peak_dispatch = 0.0;

    for (std::size_t t = 0; t < data.steps(); ++t) {
        StepRecord s;
        s.demand_gw = demand[t];
        s.wind_gen_gw = mix.wind_gw * wind_cf[t];
        s.pv_gen_gw = mix.pv_gw * pv_cf[t];

        double deficit = s.demand_gw;
        s.baseload_gw = std::min(baseload, deficit);
        deficit -= s.baseload_gw;

        const double renewable = s.wind_gen_gw + s.pv_gen_gw;
        s.renewable_to_demand_gw = std::min(renewable, deficit);
        deficit -= s.renewable_to_demand_gw;

        const double surplus = renewable - s.renewable_to_demand_gw;
        if (surplus > 0.0 && power > 0.0) {
            const double headroom_draw = (capacity - soc) / (eta * dt);
            s.battery_charge_gw = std::max(0.0, std::min({surplus, power, headroom_draw}));
            soc = std::min(capacity, soc + eta * s.battery_charge_gw * dt);
        }
        s.curtailed_gw = surplus - s.battery_charge_gw;

        if (deficit > 0.0 && power > 0.0 && soc > 0.0) {
            s.battery_discharge_gw = std::min({deficit, power, soc / dt});
            soc = std::max(0.0, soc - s.battery_discharge_gw * dt);
            deficit -= s.battery_discharge_gw;
        }

        s.dispatch_gw = std::min(deficit, opt.dispatch_limit_gw);
        s.unserved_gw = deficit - s.dispatch_gw;

        if (opt.charge_from_dispatch && s.battery_discharge_gw == 0.0) {
            const double spare = opt.dispatch_limit_gw - s.dispatch_gw;
            const double port = power - s.battery_charge_gw;
            const double headroom_draw = (capacity - soc) / (eta * dt);
            const double draw = std::min({spare, port, headroom_draw});
            if (draw > 0.0) {
                s.dispatch_charge_gw = draw;
                soc = std::min(capacity, soc + eta * draw * dt);
            }
        }
        s.soc_gwh = soc;

        const double dispatch_out = s.dispatch_gw + s.dispatch_charge_gw;
        peak_dispatch = std::max(peak_dispatch, dispatch_out);
        demand_e.add(s.demand_gw * dt);
        wind_e.add(s.wind_gen_gw * dt);
        pv_e.add(s.pv_gen_gw * dt);
        base_e.add(s.baseload_gw * dt);
        charge_e.add((s.battery_charge_gw + s.dispatch_charge_gw) * dt);
        discharge_e.add(s.battery_discharge_gw * dt);
        dispatch_e.add(dispatch_out * dt);
        unserved_e.add(s.unserved_gw * dt);
        curtailed_e.add(s.curtailed_gw * dt);
        if (res.trace) {
            res.trace->push_back(s);
        }
    }

    constexpr double gwh_per_twh = 1000.0;
    res.demand_energy_twh = demand_e.value() / gwh_per_twh;
    res.wind_energy_twh = wind_e.value() / gwh_per_twh;
    res.pv_energy_twh = pv_e.value() / gwh_per_twh;
    res.baseload_energy_twh = base_e.value() / gwh_per_twh;
    res.battery_charge_twh = charge_e.value() / gwh_per_twh;
    res.battery_discharge_twh = discharge_e.value() / gwh_per_twh;
    res.dispatch_energy_twh = dispatch_e.value() / gwh_per_twh;
    res.unserved_energy_twh = unserved_e.value() / gwh_per_twh;
    res.curtailed_twh = curtailed_e.value() / gwh_per_twh;
    res.renewable_gen_twh = (wind_e.value() + pv_e.value()) / gwh_per_twh;
    res.peak_dispatch_gw = peak_dispatch;
    res.final_soc_gwh = soc;

    const double hours = res.total_hours;
    res.wind_cf = ratio_or_zero(res.wind_energy_twh * gwh_per_twh, mix.wind_gw * hours);
    res.pv_cf = ratio_or_zero(res.pv_energy_twh * gwh_per_twh, mix.pv_gw * hours);
    if (std::isfinite(opt.dispatch_limit_gw)) {
        res.dispatch_cf =
            ratio_or_zero(res.dispatch_energy_twh * gwh_per_twh, opt.dispatch_limit_gw * hours);
    }
    res.curtailed_fraction = ratio_or_zero(res.curtailed_twh, res.renewable_gen_twh);
    return res;
}

}  // namespace

void CapacityMix::validate() const {
    require(nonnegative(wind_gw), "wind_gw must be >= 0");
    require(nonnegative(pv_gw), "pv_gw must be >= 0");
    require(nonnegative(battery_power_gw), "battery_power_gw must be >= 0");
    require(nonnegative(battery_hours), "battery_hours must be >= 0");
    require(nonnegative(dispatch_gw), "dispatch_gw must be >= 0");
    require(nonnegative(baseload_gw), "baseload_gw must be >= 0");
    require(nonnegative(baseload_eaf) && baseload_eaf <= 1.0, "baseload_eaf must be in [0, 1]");
}

void SimParams::validate() const {
    require(round_trip_efficiency > 0.0 && round_trip_efficiency <= 1.0,
            "round_trip_efficiency must be in (0, 1]");
    require(initial_soc_fraction >= 0.0 && initial_soc_fraction <= 1.0,
            "initial_soc_fraction must be in [0, 1]");
}

DispatchResult simulate(const CapacityMix& mix, const AlignedDataset& data,
                        const SimParams& params, bool keep_trace) {
    mix.validate();
    params.validate();
    return run_pass(mix, data, params,
                    {mix.dispatch_gw, params.battery_charges_from_dispatch, keep_trace});
}

double size_dispatch(const CapacityMix& mix_without_dispatch, const AlignedDataset& data,
                     const SimParams& params) {
    CapacityMix mix = mix_without_dispatch;
    mix.dispatch_gw = 0.0;
    mix.validate();
    params.validate();
    // Charging from dispatch only ever raises the state of charge, so the
    // deficit seen without it bounds the deficit seen with it.
    const auto res = run_pass(mix, data, params,
                              {std::numeric_limits<double>::infinity(), false, false});
    return res.peak_dispatch_gw;
}

AlignedDataset scale_demand(const AlignedDataset& data, double multiplier) {
    if (!(multiplier > 0.0) || !std::isfinite(multiplier)) {
        throw Error(ErrorKind::InvalidArgument,
                    "demand multiplier must be positive, got " + format_number(multiplier));
    }
    const auto& d = data.demand();
    std::vector<double> scaled(d.values().begin(), d.values().end());
    for (double& v : scaled) {
        v *= multiplier;
    }
    return AlignedDataset(TimeSeries(std::move(scaled), d.dt_hours(), d.kind(), d.label(),
                                     d.timestamps()),
                          data.wind_cf(), data.pv_cf());
}

void write_trace_csv(std::ostream& out, const std::vector<StepRecord>& trace) {
    out << "step,demand_gw,baseload_gw,renewable_to_demand_gw,battery_charge_gw,"
           "battery_discharge_gw,curtailed_gw,dispatch_gw,unserved_gw,soc_gwh\n";
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const auto& s = trace[i];
        out << i << ',' << format_number(s.demand_gw) << ',' << format_number(s.baseload_gw) << ','
            << format_number(s.renewable_to_demand_gw) << ','
            << format_number(s.battery_charge_gw) << ','
            << format_number(s.battery_discharge_gw) << ',' << format_number(s.curtailed_gw)
            << ',' << format_number(s.dispatch_gw) << ',' << format_number(s.unserved_gw) << ','
            << format_number(s.soc_gwh) << '\n';
    }
}

}  // namespace firmgrid
