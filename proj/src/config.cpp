#include "firmgrid/config.hpp"

#include "firmgrid/error.hpp"
#include "firmgrid/numfmt.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

namespace firmgrid {

namespace {

[[noreturn]] void bad_key(std::string_view key, const std::string& why) {
    throw Error(ErrorKind::Config, "config key '" + std::string(key) + "': " + why);
}

double to_double(std::string_view key, std::string_view v) {
    const auto x = parse_number(v);
    if (!x || !std::isfinite(*x)) {
        bad_key(key, "expected a finite number, got '" + std::string(v) + "'");
    }
    return *x;
}

long long to_integer(std::string_view key, std::string_view v) {
    const double x = to_double(key, v);
    if (x != std::floor(x) || std::abs(x) > 9.0e15) {
        bad_key(key, "expected an integer, got '" + std::string(v) + "'");
    }
    return static_cast<long long>(x);
}

bool to_bool(std::string_view key, std::string_view v) {
    if (v == "true") {
        return true;
    }
    if (v == "false") {
        return false;
    }
    bad_key(key, "expected true or false, got '" + std::string(v) + "'");
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    if (trim(text).empty()) {
        return parts;
    }
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        parts.push_back(trim(text.substr(start, pos - start)));
        if (pos == std::string_view::npos) {
            break;
        }
        start = pos + 1;
    }
    return parts;
}

std::vector<double> to_list(std::string_view key, std::string_view v) {
    std::vector<double> out;
    for (auto part : split(v, ',')) {
        out.push_back(to_double(key, part));
    }
    return out;
}

std::string list_text(const std::vector<double>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) {
            s += ',';
        }
        s += format_number(xs[i]);
    }
    return s;
}

std::vector<DroughtWindow> to_windows(std::string_view key, std::string_view v) {
    std::vector<DroughtWindow> out;
    for (auto part : split(v, ',')) {
        const auto dash = part.find('-');
        if (dash == std::string_view::npos) {
            bad_key(key, "expected begin-end hour pairs, got '" + std::string(part) + "'");
        }
        const auto b = to_integer(key, part.substr(0, dash));
        const auto e = to_integer(key, part.substr(dash + 1));
        if (b < 0 || e <= b) {
            bad_key(key, "window '" + std::string(part) + "' must satisfy 0 <= begin < end");
        }
        out.push_back({static_cast<std::size_t>(b), static_cast<std::size_t>(e)});
    }
    return out;
}

std::string windows_text(const std::vector<DroughtWindow>& ws) {
    std::string s;
    for (std::size_t i = 0; i < ws.size(); ++i) {
        if (i) {
            s += ',';
        }
        s += std::to_string(ws[i].begin_hour) + '-' + std::to_string(ws[i].end_hour);
    }
    return s;
}

struct KeySpec {
    std::string name;
    std::function<void(RunConfig&, std::string_view)> set;
    std::function<std::optional<std::string>(const RunConfig&)> get;
};

template <typename Ref>
KeySpec real_key(std::string name, Ref ref) {
    return {name,
            [name, ref](RunConfig& c, std::string_view v) { ref(c) = to_double(name, v); },
            [ref](const RunConfig& c) { return std::optional(format_number(ref(c))); }};
}

template <typename Ref>
KeySpec optional_real_key(std::string name, Ref ref) {
    return {name,
            [name, ref](RunConfig& c, std::string_view v) { ref(c) = to_double(name, v); },
            [ref](const RunConfig& c) -> std::optional<std::string> {
                const auto& x = ref(c);
                return x ? std::optional(format_number(*x)) : std::nullopt;
            }};
}

template <typename Ref>
KeySpec int_key(std::string name, Ref ref) {
    return {name,
            [name, ref](RunConfig& c, std::string_view v) {
                const auto x = to_integer(name, v);
                if (x < 0 || x > std::numeric_limits<int>::max()) {
                    bad_key(name, "out of range");
                }
                ref(c) = static_cast<std::remove_reference_t<decltype(ref(c))>>(x);
            },
            [ref](const RunConfig& c) { return std::optional(std::to_string(ref(c))); }};
}

template <typename Ref>
KeySpec bool_key(std::string name, Ref ref) {
    return {name, [name, ref](RunConfig& c, std::string_view v) { ref(c) = to_bool(name, v); },
            [ref](const RunConfig& c) {
                return std::optional(std::string(ref(c) ? "true" : "false"));
            }};
}

template <typename Ref>
KeySpec text_key(std::string name, Ref ref) {
    return {name, [ref](RunConfig& c, std::string_view v) { ref(c) = std::string(v); },
            [ref](const RunConfig& c) { return std::optional(ref(c)); }};
}

#define FG_REF(expr) [](auto& c) -> auto& { return c.expr; }

const std::vector<KeySpec>& registry() {
    static const std::vector<KeySpec> keys = [] {
        std::vector<KeySpec> k;
        k.push_back(text_key("scenario", FG_REF(scenario)));
        k.push_back({"dataset_source",
                     [](RunConfig& c, std::string_view v) {
                         if (v == "files") {
                             c.dataset.source = DatasetSource::Files;
                         } else if (v == "synthetic") {
                             c.dataset.source = DatasetSource::Synthetic;
                         } else {
                             bad_key("dataset_source", "expected files or synthetic");
                         }
                     },
                     [](const RunConfig& c) {
                         return std::optional(std::string(
                             c.dataset.source == DatasetSource::Files ? "files" : "synthetic"));
                     }});
        k.push_back(text_key("demand_csv", FG_REF(dataset.demand_csv)));
        k.push_back(text_key("wind_cf_csv", FG_REF(dataset.wind_cf_csv)));
        k.push_back(text_key("pv_cf_csv", FG_REF(dataset.pv_cf_csv)));
        k.push_back(real_key("dt_hours", FG_REF(dataset.dt_hours)));
        k.push_back({"synthetic_seed",
                     [](RunConfig& c, std::string_view v) {
                         const auto x = to_integer("synthetic_seed", v);
                         if (x < 0) {
                             bad_key("synthetic_seed", "must be >= 0");
                         }
                         c.dataset.synthetic_seed = static_cast<std::uint64_t>(x);
                     },
                     [](const RunConfig& c) {
                         return std::optional(std::to_string(c.dataset.synthetic_seed));
                     }});
        k.push_back(int_key("synthetic_hours", FG_REF(dataset.synthetic_hours)));
        k.push_back({"synthetic_droughts",
                     [](RunConfig& c, std::string_view v) {
                         c.dataset.synthetic_droughts = to_windows("synthetic_droughts", v);
                     },
                     [](const RunConfig& c) {
                         return std::optional(windows_text(c.dataset.synthetic_droughts));
                     }});

        k.push_back(real_key("round_trip_efficiency", FG_REF(sim.round_trip_efficiency)));
        k.push_back(real_key("initial_soc_fraction", FG_REF(sim.initial_soc_fraction)));
        k.push_back(bool_key("battery_charges_from_dispatch",
                             FG_REF(sim.battery_charges_from_dispatch)));

        k.push_back(real_key("capex_wind_usd_per_kw", FG_REF(book.capex_wind_usd_per_kw)));
        k.push_back(real_key("capex_pv_usd_per_kw", FG_REF(book.capex_pv_usd_per_kw)));
        k.push_back(real_key("capex_dispatch_usd_per_kw", FG_REF(book.capex_dispatch_usd_per_kw)));
        k.push_back(real_key("capex_battery_usd_per_kwh", FG_REF(book.capex_battery_usd_per_kwh)));
        k.push_back(real_key("interest_rate", FG_REF(book.interest_rate)));
        k.push_back(int_key("life_years_wind", FG_REF(book.life_years_wind)));
        k.push_back(int_key("life_years_pv", FG_REF(book.life_years_pv)));
        k.push_back(int_key("life_years_dispatch", FG_REF(book.life_years_dispatch)));
        k.push_back(int_key("life_years_battery", FG_REF(book.life_years_battery)));
        k.push_back(real_key("fixed_om_wind_usd_per_kw_yr", FG_REF(book.fixed_om_wind_usd_per_kw_yr)));
        k.push_back(real_key("fixed_om_pv_usd_per_kw_yr", FG_REF(book.fixed_om_pv_usd_per_kw_yr)));
        k.push_back(real_key("fixed_om_battery_usd_per_kw_yr",
                             FG_REF(book.fixed_om_battery_usd_per_kw_yr)));
        k.push_back(real_key("fixed_om_dispatch_usd_per_kw_yr",
                             FG_REF(book.fixed_om_dispatch_usd_per_kw_yr)));
        k.push_back(real_key("fuel_price_usd_per_gj", FG_REF(book.fuel_price_usd_per_gj)));
        k.push_back(real_key("heat_rate_gj_per_mwh", FG_REF(book.heat_rate_gj_per_mwh)));

        k.push_back(optional_real_key("wind_gw_min", FG_REF(search.wind_gw_min)));
        k.push_back(optional_real_key("wind_gw_max", FG_REF(search.wind_gw_max)));
        k.push_back(optional_real_key("wind_gw_step", FG_REF(search.wind_gw_step)));
        k.push_back(optional_real_key("pv_gw_min", FG_REF(search.pv_gw_min)));
        k.push_back(optional_real_key("pv_gw_max", FG_REF(search.pv_gw_max)));
        k.push_back(optional_real_key("pv_gw_step", FG_REF(search.pv_gw_step)));
        k.push_back(optional_real_key("battery_power_gw_min", FG_REF(search.battery_power_gw_min)));
        k.push_back(optional_real_key("battery_power_gw_max", FG_REF(search.battery_power_gw_max)));
        k.push_back(optional_real_key("battery_power_gw_step", FG_REF(search.battery_power_gw_step)));
        k.push_back({"battery_hours_ladder",
                     [](RunConfig& c, std::string_view v) {
                         c.search.battery_hours_ladder = to_list("battery_hours_ladder", v);
                     },
                     [](const RunConfig& c) {
                         return std::optional(list_text(c.search.battery_hours_ladder));
                     }});
        k.push_back(real_key("refine_tolerance_gw", FG_REF(search.options.refine_tolerance_gw)));
        k.push_back(real_key("refine_tolerance_hours", FG_REF(search.options.refine_tolerance_hours)));
        k.push_back(int_key("threads", FG_REF(search.options.threads)));

        k.push_back(real_key("wind_gw", FG_REF(mix.wind_gw)));
        k.push_back(real_key("pv_gw", FG_REF(mix.pv_gw)));
        k.push_back(real_key("battery_power_gw", FG_REF(mix.battery_power_gw)));
        k.push_back(real_key("battery_hours", FG_REF(mix.battery_hours)));
        k.push_back(optional_real_key("dispatch_gw", FG_REF(fixed_dispatch_gw)));
        k.push_back(real_key("baseload_gw", FG_REF(mix.baseload_gw)));
        k.push_back(real_key("baseload_eaf", FG_REF(mix.baseload_eaf)));

        k.push_back(real_key("low_storage_price_usd_per_kwh", FG_REF(low_storage_price_usd_per_kwh)));
        k.push_back({"fuel_prices_usd_per_gj",
                     [](RunConfig& c, std::string_view v) {
                         c.fuel_prices_usd_per_gj = to_list("fuel_prices_usd_per_gj", v);
                     },
                     [](const RunConfig& c) {
                         return std::optional(list_text(c.fuel_prices_usd_per_gj));
                     }});
        k.push_back(real_key("residual_baseload_gw", FG_REF(residual_baseload_gw)));
        k.push_back(real_key("residual_baseload_eaf", FG_REF(residual_baseload_eaf)));
        k.push_back(real_key("rigidity_step", FG_REF(rigidity_step)));
        k.push_back(real_key("rigidity_max_multiplier", FG_REF(rigidity_max_multiplier)));
        k.push_back(text_key("rigidity_mix", FG_REF(rigidity_mix)));
        k.push_back(real_key("pv_only_max_battery_hours", FG_REF(pv_only_max_battery_hours)));
        k.push_back(bool_key("pv_only_cyclic_soc", FG_REF(pv_only_cyclic_soc)));

        k.push_back(text_key("output_dir", FG_REF(output_dir)));
        k.push_back(bool_key("write_trace", FG_REF(write_trace)));
        return k;
    }();
    return keys;
}

#undef FG_REF

// Re-labels an invariant failure from a domain type as a config error.
template <typename F>
void check(F&& validate) {
    try {
        validate();
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::Config) {
            throw;
        }
        throw Error(ErrorKind::Config, std::string("invalid config: ") + e.what());
    }
}

void require_key(bool ok, std::string_view key, const std::string& why) {
    if (!ok) {
        bad_key(key, why);
    }
}

}  // namespace

std::vector<std::string> config_keys() {
    std::vector<std::string> names;
    for (const auto& k : registry()) {
        names.push_back(k.name);
    }
    return names;
}

void RunConfig::validate() const {
    require_key(std::find(kScenarioNames.begin(), kScenarioNames.end(), scenario) !=
                    kScenarioNames.end(),
                "scenario", "unknown scenario '" + scenario + "'");
    if (dataset.source == DatasetSource::Files) {
        require_key(!dataset.demand_csv.empty(), "demand_csv", "missing mandatory key");
        require_key(!dataset.wind_cf_csv.empty(), "wind_cf_csv", "missing mandatory key");
        require_key(!dataset.pv_cf_csv.empty(), "pv_cf_csv", "missing mandatory key");
        require_key(dataset.dt_hours == 1.0 || dataset.dt_hours == 0.5, "dt_hours",
                    "must be 1 or 0.5");
    } else {
        require_key(dataset.synthetic_hours >= 24, "synthetic_hours", "must be >= 24");
        for (const auto& w : dataset.synthetic_droughts) {
            require_key(w.end_hour <= dataset.synthetic_hours, "synthetic_droughts",
                        "window ends past synthetic_hours");
        }
    }
    check([&] { sim.validate(); });
    check([&] { book.validate(); });
    check([&] { mix.validate(); });
    if (fixed_dispatch_gw) {
        require_key(*fixed_dispatch_gw >= 0.0, "dispatch_gw", "must be >= 0");
    }

    const std::pair<const char*, const std::optional<double>*> bounds[] = {
        {"wind_gw_min", &search.wind_gw_min},
        {"wind_gw_max", &search.wind_gw_max},
        {"pv_gw_min", &search.pv_gw_min},
        {"pv_gw_max", &search.pv_gw_max},
        {"battery_power_gw_min", &search.battery_power_gw_min},
        {"battery_power_gw_max", &search.battery_power_gw_max},
    };
    for (const auto& [name, value] : bounds) {
        require_key(!*value || **value >= 0.0, name, "must be >= 0");
    }
    const std::pair<const char*, const std::optional<double>*> steps[] = {
        {"wind_gw_step", &search.wind_gw_step},
        {"pv_gw_step", &search.pv_gw_step},
        {"battery_power_gw_step", &search.battery_power_gw_step},
    };
    for (const auto& [name, value] : steps) {
        require_key(!*value || **value > 0.0, name, "must be > 0");
    }
    auto ordered = [](const std::optional<double>& lo, const std::optional<double>& hi) {
        return !lo || !hi || *lo <= *hi;
    };
    require_key(ordered(search.wind_gw_min, search.wind_gw_max), "wind_gw_min", "exceeds wind_gw_max");
    require_key(ordered(search.pv_gw_min, search.pv_gw_max), "pv_gw_min", "exceeds pv_gw_max");
    require_key(ordered(search.battery_power_gw_min, search.battery_power_gw_max),
                "battery_power_gw_min", "exceeds battery_power_gw_max");
    const auto& ladder = search.battery_hours_ladder;
    require_key(!ladder.empty(), "battery_hours_ladder", "must list at least one rung");
    for (std::size_t i = 0; i < ladder.size(); ++i) {
        require_key(ladder[i] >= 0.0 && (i == 0 || ladder[i] > ladder[i - 1]),
                    "battery_hours_ladder", "rungs must be >= 0 and strictly ascending");
    }
    require_key(search.options.refine_tolerance_gw > 0.0, "refine_tolerance_gw", "must be > 0");
    require_key(search.options.refine_tolerance_hours > 0.0, "refine_tolerance_hours",
                "must be > 0");

    require_key(low_storage_price_usd_per_kwh > 0.0, "low_storage_price_usd_per_kwh",
                "must be > 0");
    require_key(!fuel_prices_usd_per_gj.empty(), "fuel_prices_usd_per_gj",
                "must list at least one price");
    for (double p : fuel_prices_usd_per_gj) {
        require_key(p > 0.0, "fuel_prices_usd_per_gj", "prices must be > 0");
    }
    require_key(residual_baseload_gw >= 0.0, "residual_baseload_gw", "must be >= 0");
    require_key(residual_baseload_eaf >= 0.0 && residual_baseload_eaf <= 1.0,
                "residual_baseload_eaf", "must be in [0, 1]");
    require_key(rigidity_step > 0.0, "rigidity_step", "must be > 0");
    require_key(rigidity_max_multiplier > 1.0, "rigidity_max_multiplier", "must be > 1");
    require_key(rigidity_mix == "pv-only" || rigidity_mix == "fixed", "rigidity_mix",
                "expected pv-only or fixed");
    require_key(pv_only_max_battery_hours >= 0.0, "pv_only_max_battery_hours", "must be >= 0");
    require_key(!output_dir.empty(), "output_dir", "must not be empty");
}

RunConfig parse_config(std::string_view text) {
    std::map<std::string, const KeySpec*, std::less<>> lookup;
    for (const auto& k : registry()) {
        lookup.emplace(k.name, &k);
    }
    RunConfig config;
    std::map<std::string, std::size_t, std::less<>> seen;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = text.find('\n', start);
        std::string_view line = text.substr(start, end == std::string_view::npos ? end : end - start);
        start = end == std::string_view::npos ? text.size() + 1 : end + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto colon = line.find(':');
        if (colon == std::string_view::npos) {
            throw Error(ErrorKind::Config, "config line " + std::to_string(line_no) +
                                               ": expected 'key: value'");
        }
        const auto key = trim(line.substr(0, colon));
        const auto value = trim(line.substr(colon + 1));
        const auto it = lookup.find(key);
        if (it == lookup.end()) {
            bad_key(key, "unknown key");
        }
        if (const auto [pos, fresh] = seen.emplace(std::string(key), line_no); !fresh) {
            bad_key(key, "duplicate (first set on line " + std::to_string(pos->second) + ")");
        }
        it->second->set(config, value);
    }
    config.validate();
    return config;
}

RunConfig load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::Io, "cannot open config " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    auto config = parse_config(buf.str());
    if (config.dataset.source == DatasetSource::Files) {
        resolve_dataset_paths(config, path.parent_path());
    }
    return config;
}

void resolve_dataset_paths(RunConfig& config, const std::filesystem::path& base_dir) {
    const std::pair<const char*, std::string*> paths[] = {
        {"demand_csv", &config.dataset.demand_csv},
        {"wind_cf_csv", &config.dataset.wind_cf_csv},
        {"pv_cf_csv", &config.dataset.pv_cf_csv},
    };
    for (const auto& [key, value] : paths) {
        std::filesystem::path p(*value);
        if (p.is_relative()) {
            p = base_dir / p;
        }
        p = p.lexically_normal();
        if (p.is_relative()) {
            p = std::filesystem::absolute(p);
        }
        if (!std::filesystem::exists(p)) {
            throw Error(ErrorKind::Io,
                        "config key '" + std::string(key) + "': no such file " + p.string());
        }
        *value = p.string();
    }
}

void resolve_search(RunConfig& config, double peak_gw) {
    const auto defaults = SearchSpace::scaled_to_peak(peak_gw);
    auto& s = config.search;
    auto fill = [](std::optional<double>& slot, double v) {
        if (!slot) {
            slot = v;
        }
    };
    fill(s.wind_gw_min, defaults.wind_gw.min);
    fill(s.wind_gw_max, std::max(defaults.wind_gw.max, *s.wind_gw_min));
    fill(s.wind_gw_step, defaults.wind_gw.step);
    fill(s.pv_gw_min, defaults.pv_gw.min);
    fill(s.pv_gw_max, std::max(defaults.pv_gw.max, *s.pv_gw_min));
    fill(s.pv_gw_step, defaults.pv_gw.step);
    fill(s.battery_power_gw_min, defaults.battery_power_gw.min);
    fill(s.battery_power_gw_max,
         std::max(defaults.battery_power_gw.max, *s.battery_power_gw_min));
    fill(s.battery_power_gw_step, defaults.battery_power_gw.step);
    config.validate();
}

SearchSpace search_space(const RunConfig& config) {
    const auto& s = config.search;
    if (!s.wind_gw_max || !s.pv_gw_max || !s.battery_power_gw_max) {
        throw Error(ErrorKind::Config, "search bounds not resolved");
    }
    SearchSpace space;
    space.wind_gw = {*s.wind_gw_min, *s.wind_gw_max, *s.wind_gw_step};
    space.pv_gw = {*s.pv_gw_min, *s.pv_gw_max, *s.pv_gw_step};
    space.battery_power_gw = {*s.battery_power_gw_min, *s.battery_power_gw_max,
                              *s.battery_power_gw_step};
    space.battery_hours = s.battery_hours_ladder;
    return space;
}

void write_manifest(std::ostream& out, const RunConfig& config) {
    out << "# resolved run configuration; feed back with --config to reproduce\n";
    for (const auto& k : registry()) {
        if (const auto v = k.get(config)) {
            out << k.name << ": " << *v << '\n';
        }
    }
}

}  // namespace firmgrid
