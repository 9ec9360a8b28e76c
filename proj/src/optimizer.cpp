#include "firmgrid/optimizer.hpp"

#include "firmgrid/error.hpp"
#include "firmgrid/numfmt.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>
#include <tuple>

namespace firmgrid {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) {
        throw Error(ErrorKind::InvalidArgument, what);
    }
}

void check_range(const DimRange& r, const char* name) {
    const std::string n(name);
    require(std::isfinite(r.min) && std::isfinite(r.max) && r.min >= 0.0,
            n + " range must be finite and >= 0");
    require(r.min <= r.max, n + " min must not exceed max");
    require(std::isfinite(r.step) && r.step > 0.0, n + " step must be > 0");
}

double installed_gw(const CapacityMix& m) {
    return m.wind_gw + m.pv_gw + m.battery_power_gw + m.dispatch_gw;
}

using Key = std::array<double, 4>;

Key key_of(const CapacityMix& m) { return {m.wind_gw, m.pv_gw, m.battery_power_gw, m.battery_hours}; }

CapacityMix mix_of(const Key& k, const SearchSpace& space) {
    CapacityMix m;
    m.wind_gw = k[0];
    m.pv_gw = k[1];
    m.battery_power_gw = k[2];
    m.battery_hours = k[3];
    m.baseload_gw = space.baseload_gw;
    m.baseload_eaf = space.baseload_eaf;
    return m;
}

// Evaluates candidates across worker threads; result order follows input order.
std::vector<Evaluation> evaluate_all(const std::vector<Key>& keys, const SearchSpace& space,
                                     const AlignedDataset& data, const SimParams& params,
                                     const CostBook& book, unsigned threads) {
    std::vector<Evaluation> out(keys.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < keys.size(); i = next++) {
            try {
                out[i] = evaluate(mix_of(keys[i], space), data, params, book);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next = keys.size();
            }
        }
    };
    const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(keys.size())));
    if (n == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(n);
        for (unsigned t = 0; t < n; ++t) {
            pool.emplace_back(worker);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return out;
}

}  // namespace

void SearchSpace::validate() const {
    check_range(wind_gw, "wind_gw");
    check_range(pv_gw, "pv_gw");
    check_range(battery_power_gw, "battery_power_gw");
    require(!battery_hours.empty(), "battery_hours ladder is empty");
    for (std::size_t i = 0; i < battery_hours.size(); ++i) {
        require(std::isfinite(battery_hours[i]) && battery_hours[i] >= 0.0,
                "battery_hours rungs must be >= 0");
        require(i == 0 || battery_hours[i] > battery_hours[i - 1],
                "battery_hours rungs must be strictly ascending");
    }
    require(std::isfinite(baseload_gw) && baseload_gw >= 0.0, "baseload_gw must be >= 0");
    require(baseload_eaf >= 0.0 && baseload_eaf <= 1.0, "baseload_eaf must be in [0, 1]");
}

SearchSpace SearchSpace::scaled_to_peak(double peak_gw) {
    require(std::isfinite(peak_gw) && peak_gw > 0.0, "peak demand must be positive");
    const double step = 0.1 * peak_gw;
    SearchSpace s;
    s.wind_gw = {0.0, 3.0 * peak_gw, step};
    s.pv_gw = {0.0, 2.0 * peak_gw, step};
    s.battery_power_gw = {0.0, peak_gw, step};
    return s;
}

std::vector<double> grid_points(const DimRange& range) {
    std::vector<double> pts;
    const double slack = 1e-9 * std::max(1.0, range.max);
    for (std::size_t k = 0;; ++k) {
        const double v = range.min + static_cast<double>(k) * range.step;
        if (v > range.max + slack) {
            break;
        }
        pts.push_back(std::min(v, range.max));
    }
    if (pts.back() < range.max) {
        pts.push_back(range.max);
    }
    return pts;
}

Evaluation evaluate(const CapacityMix& candidate, const AlignedDataset& data,
                    const SimParams& params, const CostBook& book) {
    Evaluation ev;
    ev.mix = candidate;
    ev.mix.dispatch_gw = size_dispatch(candidate, data, params);
    ev.result = simulate(ev.mix, data, params);
    ev.cost = system_cost(ev.mix, ev.result, book);
    return ev;
}

bool better_than(const Evaluation& a, const Evaluation& b, const CostBook& book) {
    if (a.cost.unit_cost_usd_per_mwh != b.cost.unit_cost_usd_per_mwh) {
        return a.cost.unit_cost_usd_per_mwh < b.cost.unit_cost_usd_per_mwh;
    }
    const double cap_a = annualized_capital(a.mix, book);
    const double cap_b = annualized_capital(b.mix, book);
    if (cap_a != cap_b) {
        return cap_a < cap_b;
    }
    const double gw_a = installed_gw(a.mix);
    const double gw_b = installed_gw(b.mix);
    if (gw_a != gw_b) {
        return gw_a < gw_b;
    }
    return key_of(a.mix) < key_of(b.mix);
}

OptimResult optimize(const SearchSpace& space, const AlignedDataset& data,
                     const SimParams& params, const CostBook& book, const OptimOptions& options) {
    space.validate();
    params.validate();
    book.validate();
    require(options.refine_tolerance_gw > 0.0 && options.refine_tolerance_hours > 0.0,
            "refine tolerances must be > 0");

    const auto wind = grid_points(space.wind_gw);
    const auto pv = grid_points(space.pv_gw);
    const auto power = grid_points(space.battery_power_gw);
    const auto& hours = space.battery_hours;

    std::vector<Key> coarse;
    coarse.reserve(wind.size() * pv.size() * power.size() * hours.size());
    for (double w : wind) {
        for (double p : pv) {
            for (double b : power) {
                for (double h : hours) {
                    coarse.push_back({w, p, b, h});
                }
            }
        }
    }
    if (coarse.empty()) {
        throw Error(ErrorKind::InvalidArgument, "search grid is empty");
    }

    const unsigned threads =
        options.threads != 0 ? options.threads : std::max(1u, std::thread::hardware_concurrency());

    std::vector<Evaluation> evals = evaluate_all(coarse, space, data, params, book, threads);
    std::map<Key, std::size_t> seen;
    for (std::size_t i = 0; i < coarse.size(); ++i) {
        seen.emplace(coarse[i], i);
    }

    OptimResult out;
    std::size_t best = 0;
    out.trajectory.push_back({evals[0].mix, evals[0].cost.unit_cost_usd_per_mwh});
    for (std::size_t i = 1; i < evals.size(); ++i) {
        if (better_than(evals[i], evals[best], book)) {
            best = i;
            out.trajectory.push_back({evals[i].mix, evals[i].cost.unit_cost_usd_per_mwh});
        }
    }

    auto lookup = [&](const Key& k) -> std::size_t {
        if (auto it = seen.find(k); it != seen.end()) {
            return it->second;
        }
        evals.push_back(evaluate(mix_of(k, space), data, params, book));
        seen.emplace(k, evals.size() - 1);
        return evals.size() - 1;
    };

    // Coordinate pattern search around the incumbent. The coarse scan already
    // covered the immediate grid neighbours, so steps start at half the coarse step.
    const std::array<DimRange, 3> ranges{space.wind_gw, space.pv_gw, space.battery_power_gw};
    std::array<double, 4> step{};
    for (std::size_t d = 0; d < 3; ++d) {
        step[d] = ranges[d].min < ranges[d].max ? ranges[d].step / 2.0 : 0.0;
    }
    {
        const double h = evals[best].mix.battery_hours;
        const auto it = std::find(hours.begin(), hours.end(), h);
        double gap = 0.0;
        if (it != hours.begin()) {
            gap = std::max(gap, h - *std::prev(it));
        }
        if (std::next(it) != hours.end()) {
            gap = std::max(gap, *std::next(it) - h);
        }
        step[3] = gap / 2.0;
    }
    const std::array<double, 4> tol{options.refine_tolerance_gw, options.refine_tolerance_gw,
                                    options.refine_tolerance_gw, options.refine_tolerance_hours};
    auto clip = [&](std::size_t d, double v) {
        if (d == 3) {
            v = std::round(v * 2.0) / 2.0;
            return std::clamp(v, hours.front(), hours.back());
        }
        return std::clamp(v, ranges[d].min, ranges[d].max);
    };
    auto active = [&](std::size_t d) { return step[d] > 0.0 && step[d] >= tol[d]; };

    while (active(0) || active(1) || active(2) || active(3)) {
        bool improved = false;
        for (std::size_t d = 0; d < 4; ++d) {
            if (!active(d)) {
                continue;
            }
            for (double dir : {1.0, -1.0}) {
                bool moved = true;
                while (moved && seen.size() < options.max_evaluations) {
                    moved = false;
                    Key k = key_of(evals[best].mix);
                    k[d] = clip(d, k[d] + dir * step[d]);
                    if (k == key_of(evals[best].mix)) {
                        break;
                    }
                    const std::size_t idx = lookup(k);
                    if (better_than(evals[idx], evals[best], book)) {
                        best = idx;
                        out.trajectory.push_back({evals[idx].mix, evals[idx].cost.unit_cost_usd_per_mwh});
                        moved = true;
                        improved = true;
                    }
                }
            }
        }
        if (seen.size() >= options.max_evaluations) {
            break;
        }
        if (!improved) {
            for (double& s : step) {
                s /= 2.0;
            }
        }
    }

    out.best_mix = evals[best].mix;
    out.best_result = evals[best].result;
    out.best_cost = evals[best].cost;
    out.evaluations = seen.size();
    return out;
}

void write_trajectory_csv(std::ostream& out, const std::vector<TrajectoryPoint>& trajectory) {
    out << "step,wind_gw,pv_gw,battery_power_gw,battery_hours,dispatch_gw,unit_cost_usd_per_mwh\n";
    for (std::size_t i = 0; i < trajectory.size(); ++i) {
        const auto& p = trajectory[i];
        out << i << ',' << format_number(p.mix.wind_gw) << ',' << format_number(p.mix.pv_gw) << ','
            << format_number(p.mix.battery_power_gw) << ',' << format_number(p.mix.battery_hours)
            << ',' << format_number(p.mix.dispatch_gw) << ','
            << format_number(p.unit_cost_usd_per_mwh) << '\n';
    }
}

}  // namespace firmgrid
