#include "firmgrid/profiles.hpp"

#include "firmgrid/error.hpp"
#include "firmgrid/numfmt.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

namespace firmgrid {

const char* to_string(SeriesKind kind) {
    return kind == SeriesKind::DemandGw ? "demand-GW" : "capacity-factor";
}

namespace {

std::string at_row(const std::string& label, std::size_t row) {
    std::ostringstream os;
    if (!label.empty()) {
        os << label << ": ";
    }
    os << "row " << row;
    return os.str();
}

// Splits one CSV record. Double-quoted fields may hold commas; "" escapes a quote.
std::optional<std::vector<std::string>> split_record(std::string_view line) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    bool was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"') {
            if (was_quoted || !trim(field).empty()) {
                return std::nullopt;
            }
            quoted = true;
            was_quoted = true;
            field.clear();
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
            was_quoted = false;
        } else {
            field.push_back(c);
        }
    }
    if (quoted) {
        return std::nullopt;
    }
    fields.push_back(std::move(field));
    return fields;
}

}  // namespace

TimeSeries::TimeSeries(std::vector<double> values, double dt_hours, SeriesKind kind,
                       std::string label, std::vector<std::string> timestamps)
    : values_(std::move(values)),
      dt_hours_(dt_hours),
      kind_(kind),
      label_(std::move(label)),
      timestamps_(std::move(timestamps)) {
    if (values_.empty()) {
        throw Error(ErrorKind::EmptyInput, label_ + ": series has no values");
    }
    if (dt_hours_ != 1.0 && dt_hours_ != 0.5) {
        throw Error(ErrorKind::InvalidArgument,
                    label_ + ": dt_hours must be 1.0 or 0.5, got " + format_number(dt_hours_));
    }
    if (!timestamps_.empty() && timestamps_.size() != values_.size()) {
        throw Error(ErrorKind::LengthMismatch, label_ + ": timestamp count differs from value count");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        double& v = values_[i];
        if (!std::isfinite(v)) {
            throw Error(ErrorKind::NonFinite, at_row(label_, i) + ": non-finite value");
        }
        if (kind_ == SeriesKind::DemandGw) {
            if (v < 0.0) {
                throw Error(ErrorKind::NegativeDemand,
                            at_row(label_, i) + ": negative demand " + format_number(v));
            }
        } else {
            if (v < -kCapacityFactorSlack || v > 1.0 + kCapacityFactorSlack) {
                throw Error(ErrorKind::CapacityFactorRange,
                            at_row(label_, i) + ": capacity factor " + format_number(v) +
                                " outside [0, 1]");
            }
            v = std::clamp(v, 0.0, 1.0);
        }
    }
}

AlignedDataset::AlignedDataset(TimeSeries demand, TimeSeries wind_cf, TimeSeries pv_cf)
    : demand_(std::move(demand)), wind_cf_(std::move(wind_cf)), pv_cf_(std::move(pv_cf)) {
    if (demand_.kind() != SeriesKind::DemandGw || wind_cf_.kind() != SeriesKind::CapacityFactor ||
        pv_cf_.kind() != SeriesKind::CapacityFactor) {
        throw Error(ErrorKind::KindMismatch,
                    "expected demand-GW, capacity-factor, capacity-factor series");
    }
    for (const TimeSeries* cf : {&wind_cf_, &pv_cf_}) {
        if (cf->dt_hours() != demand_.dt_hours()) {
            throw Error(ErrorKind::StepMismatch,
                        "step length mismatch: demand dt " + format_number(demand_.dt_hours()) +
                            " h vs " + cf->label() + " dt " + format_number(cf->dt_hours()) + " h");
        }
        if (cf->size() != demand_.size()) {
            throw Error(ErrorKind::LengthMismatch,
                        "length mismatch: demand has " + std::to_string(demand_.size()) +
                            " steps, " + (cf->label().empty() ? "capacity factor" : cf->label()) +
                            " has " + std::to_string(cf->size()));
        }
    }
}

TimeSeries load_series(std::istream& source, SeriesKind kind, double dt_hours, std::string label) {
    std::string line;
    if (!std::getline(source, line)) {
        throw Error(ErrorKind::EmptyInput, label + ": empty input");
    }
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
        line.erase(0, 3);
    }
    const auto header = split_record(line);
    if (!header) {
        throw Error(ErrorKind::MalformedCsv, label + ": unreadable header");
    }
    std::optional<std::size_t> value_col;
    std::optional<std::size_t> time_col;
    for (std::size_t c = 0; c < header->size(); ++c) {
        const auto name = trim((*header)[c]);
        std::optional<std::size_t>* slot = nullptr;
        if (name == "value") {
            slot = &value_col;
        } else if (name == "timestamp") {
            slot = &time_col;
        } else {
            throw Error(ErrorKind::MalformedCsv,
                        label + ": unexpected column '" + std::string(name) + "'");
        }
        if (slot->has_value()) {
            throw Error(ErrorKind::MalformedCsv,
                        label + ": duplicate column '" + std::string(name) + "'");
        }
        *slot = c;
    }
    if (!value_col) {
        throw Error(ErrorKind::MalformedCsv, label + ": missing 'value' column");
    }

    std::vector<double> values;
    std::vector<std::string> stamps;
    std::size_t blank_run = 0;
    while (std::getline(source, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (trim(line).empty()) {
            ++blank_run;
            continue;
        }
        const std::size_t row = values.size();
        if (blank_run > 0) {
            throw Error(ErrorKind::MalformedCsv, at_row(label, row) + ": blank line inside data");
        }
        const auto fields = split_record(line);
        if (!fields || fields->size() != header->size()) {
            throw Error(ErrorKind::MalformedCsv, at_row(label, row) + ": wrong field count");
        }
        const auto parsed = parse_number((*fields)[*value_col]);
        if (!parsed) {
            throw Error(ErrorKind::MalformedCsv,
                        at_row(label, row) + ": cannot parse '" + (*fields)[*value_col] + "'");
        }
        values.push_back(*parsed);
        if (time_col) {
            stamps.emplace_back(trim((*fields)[*time_col]));
        }
    }
    if (values.empty()) {
        throw Error(ErrorKind::EmptyInput, label + ": no data rows");
    }
    return TimeSeries(std::move(values), dt_hours, kind, std::move(label), std::move(stamps));
}

TimeSeries load_series_file(const std::string& path, SeriesKind kind, double dt_hours) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::Io, "cannot open " + path);
    }
    return load_series(in, kind, dt_hours, path);
}

void write_series(std::ostream& out, const TimeSeries& series) {
    const bool stamped = !series.timestamps().empty();
    out << (stamped ? "timestamp,value\n" : "value\n");
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (stamped) {
            const auto& ts = series.timestamps()[i];
            if (ts.find_first_of(",\"") != std::string::npos) {
                out << '"';
                for (char c : ts) {
                    out << c;
                    if (c == '"') {
                        out << '"';
                    }
                }
                out << "\",";
            } else {
                out << ts << ',';
            }
        }
        out << format_number(series[i]) << '\n';
    }
}

AlignedDataset align(TimeSeries demand, TimeSeries wind_cf, TimeSeries pv_cf) {
    return AlignedDataset(std::move(demand), std::move(wind_cf), std::move(pv_cf));
}

DemandStats demand_stats(const TimeSeries& demand) {
    if (demand.kind() != SeriesKind::DemandGw) {
        throw Error(ErrorKind::KindMismatch, "demand_stats needs a demand-GW series");
    }
    DemandStats stats;
    double sum_gwh = 0.0;
    for (double v : demand.values()) {
        stats.peak_gw = std::max(stats.peak_gw, v);
        sum_gwh += v * demand.dt_hours();
    }
    stats.annual_energy_twh = sum_gwh / 1000.0;
    stats.average_gw = stats.annual_energy_twh * 1000.0 / demand.total_hours();
    return stats;
}

namespace {

// mt19937_64 output is fixed by the standard; the distributions are not, so
// uniform and normal draws are derived here to keep fixtures portable.
class FixtureRng {
public:
    explicit FixtureRng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double normal() {
        // Box-Muller; u1 kept away from zero
        const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace

AlignedDataset synthesize_dataset(std::uint64_t seed, std::size_t total_hours,
                                  std::span<const DroughtWindow> droughts) {
    if (total_hours < 24) {
        throw Error(ErrorKind::InvalidArgument, "synthetic dataset needs at least 24 hours");
    }
    for (const auto& w : droughts) {
        if (w.begin_hour >= w.end_hour || w.end_hour > total_hours) {
            throw Error(ErrorKind::WindowOutOfRange,
                        "drought window [" + std::to_string(w.begin_hour) + ", " +
                            std::to_string(w.end_hour) + ") outside [0, " +
                            std::to_string(total_hours) + ")");
        }
    }

    constexpr double two_pi = 2.0 * std::numbers::pi;
    FixtureRng rng(seed);
    std::vector<double> demand(total_hours);
    std::vector<double> wind(total_hours);
    std::vector<double> pv(total_hours);

    const double base_gw = 20.0 + 10.0 * rng.uniform();
    const double season_phase = two_pi * rng.uniform();
    double wind_state = rng.normal();
    double cloudiness = 0.0;
    for (std::size_t h = 0; h < total_hours; ++h) {
        const double hour_of_day = static_cast<double>(h % 24);
        const double day = static_cast<double>(h / 24);
        const double season = std::cos(two_pi * day / 365.0 + season_phase);

        // evening peak around 19:00, trough before dawn
        const double diurnal = 0.12 * std::sin(two_pi * (hour_of_day - 13.0) / 24.0) +
                               0.06 * std::sin(two_pi * (hour_of_day - 4.0) / 12.0);
        demand[h] = base_gw * (1.0 + 0.08 * season + diurnal + 0.02 * rng.normal());
        demand[h] = std::max(demand[h], 0.25 * base_gw);

        // AR(1) in a latent space mapped through a logistic curve
        wind_state = 0.97 * wind_state + 0.243 * rng.normal();
        const double latent = wind_state - 0.6 + 0.3 * season;
        wind[h] = 1.0 / (1.0 + std::exp(-1.6 * latent));

        if (h % 24 == 0) {
            cloudiness = 0.6 * rng.uniform();
        }
        const double sun = std::sin(two_pi * (hour_of_day - 6.0) / 24.0);
        const double clear_sky = sun > 0.0 ? sun * (0.85 - 0.1 * season) : 0.0;
        pv[h] = std::clamp(clear_sky * (1.0 - cloudiness), 0.0, 1.0);
    }
    for (const auto& w : droughts) {
        std::fill(wind.begin() + static_cast<std::ptrdiff_t>(w.begin_hour),
                  wind.begin() + static_cast<std::ptrdiff_t>(w.end_hour), 0.0);
        std::fill(pv.begin() + static_cast<std::ptrdiff_t>(w.begin_hour),
                  pv.begin() + static_cast<std::ptrdiff_t>(w.end_hour), 0.0);
    }
    return AlignedDataset(TimeSeries(std::move(demand), 1.0, SeriesKind::DemandGw, "demand"),
                          TimeSeries(std::move(wind), 1.0, SeriesKind::CapacityFactor, "wind_cf"),
                          TimeSeries(std::move(pv), 1.0, SeriesKind::CapacityFactor, "pv_cf"));
}

}  // namespace firmgrid
