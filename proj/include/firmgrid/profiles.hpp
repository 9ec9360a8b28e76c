#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace firmgrid {

enum class SeriesKind { DemandGw, CapacityFactor };

const char* to_string(SeriesKind kind);

/// Fixed-step series of demand (GW) or capacity-factor values.
///
/// Construction validates every value, so a TimeSeries in hand always holds
/// finite, nonempty data in the range its kind allows. Capacity factors that
/// overshoot [0, 1] by at most kCapacityFactorSlack are clamped; anything
/// further out is rejected.
class TimeSeries {
public:
    static constexpr double kCapacityFactorSlack = 1e-9;

    TimeSeries(std::vector<double> values, double dt_hours, SeriesKind kind,
               std::string label = {}, std::vector<std::string> timestamps = {});

    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t i) const noexcept { return values_[i]; }
    std::size_t size() const noexcept { return values_.size(); }
    double dt_hours() const noexcept { return dt_hours_; }
    SeriesKind kind() const noexcept { return kind_; }
    const std::string& label() const noexcept { return label_; }
    // Opaque; empty when the source had no timestamp column.
    const std::vector<std::string>& timestamps() const noexcept { return timestamps_; }

    double total_hours() const noexcept { return static_cast<double>(values_.size()) * dt_hours_; }

    friend bool operator==(const TimeSeries&, const TimeSeries&) = default;

private:
    std::vector<double> values_;
    double dt_hours_;
    SeriesKind kind_;
    std::string label_;
    std::vector<std::string> timestamps_;
};

/// Demand plus wind and PV capacity factors on a common time axis.
class AlignedDataset {
public:
    AlignedDataset(TimeSeries demand, TimeSeries wind_cf, TimeSeries pv_cf);

    const TimeSeries& demand() const noexcept { return demand_; }
    const TimeSeries& wind_cf() const noexcept { return wind_cf_; }
    const TimeSeries& pv_cf() const noexcept { return pv_cf_; }

    std::size_t steps() const noexcept { return demand_.size(); }
    double dt_hours() const noexcept { return demand_.dt_hours(); }
    double total_hours() const noexcept { return demand_.total_hours(); }

    friend bool operator==(const AlignedDataset&, const AlignedDataset&) = default;

private:
    TimeSeries demand_;
    TimeSeries wind_cf_;
    TimeSeries pv_cf_;
};

struct DemandStats {
    double peak_gw = 0.0;
    double average_gw = 0.0;
    double annual_energy_twh = 0.0;
};

/// Half-open window [begin_hour, end_hour) of forced zero wind and PV output.
struct DroughtWindow {
    std::size_t begin_hour = 0;
    std::size_t end_hour = 0;
};

TimeSeries load_series(std::istream& source, SeriesKind kind, double dt_hours,
                       std::string label = {});
TimeSeries load_series_file(const std::string& path, SeriesKind kind, double dt_hours);

// Writes the CSV form read by load_series (timestamp column only when present).
void write_series(std::ostream& out, const TimeSeries& series);

AlignedDataset align(TimeSeries demand, TimeSeries wind_cf, TimeSeries pv_cf);

DemandStats demand_stats(const TimeSeries& demand);

/// Deterministic hourly test fixture: demand with seasonal and diurnal shape,
/// autocorrelated wind, clear-sky PV with day-to-day cloudiness.
AlignedDataset synthesize_dataset(std::uint64_t seed, std::size_t total_hours,
                                  std::span<const DroughtWindow> droughts = {});

}  // namespace firmgrid
