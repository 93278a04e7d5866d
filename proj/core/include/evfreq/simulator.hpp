#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "evfreq/fleet.hpp"
#include "evfreq/metrics.hpp"
#include "evfreq/response_controller.hpp"
#include "evfreq/system_model.hpp"
#include "evfreq/time_of_day.hpp"

namespace evfreq {

/// One contingency experiment.
struct Scenario {
    GridParameters grid;
    /// When present, h_eff and s_base are taken from this mix.
    std::optional<GenerationMix> mix;
    /// Applied last; wins over both `grid.h_eff_s` and the mix.
    std::optional<double> h_eff_override_s;
    FleetConfig fleet;
    ControllerConfig controller;
    double disturbance_mw = 1800.0;
    double event_time_s = 0.0;
    TimeOfDay clock = TimeOfDay::from_hm(20);
    double horizon_s = 60.0;
    double step_s = 0.01;
    /// Extra undisturbed seconds simulated before t = 0 (plots show the
    /// pre-drop level). Samples then start at t = -padding.
    double pre_event_padding_s = 0.0;

    /// Grid parameters after applying the mix and the override.
    GridParameters effective_grid() const;
    /// Throws DomainError / InfeasibleError.
    void validate() const;
    /// Number of integration steps from the first sample to the horizon.
    std::size_t step_count() const;
};

Trajectory simulate(const Scenario& scenario);

struct ParallelOptions {
    /// Worker threads; 0 picks std::thread::hardware_concurrency().
    unsigned jobs = 1;
};

struct SweepRow {
    ChargingStrategy strategy = ChargingStrategy::Immediate;
    ControlMode mode = ControlMode::V1G;
    double participation = 0.0;
    FrequencyMetrics metrics;
};

/// One simulation per (strategy, mode, level), returned in that nesting order
/// (strategy outermost). An empty `strategies` means the base fleet strategy.
std::vector<SweepRow> participation_sweep(const Scenario& base, std::span<const double> levels,
                                          std::span<const ControlMode> modes,
                                          const MetricsOptions& metrics = {},
                                          std::span<const ChargingStrategy> strategies = {},
                                          ParallelOptions parallel = {});

struct DayProfileRow {
    TimeOfDay clock;
    GenerationMix mix;
};

/// Dispatch at each 15-minute mark of one day.
class DayProfile {
public:
    static constexpr std::size_t kIntervals = 96;
    static constexpr double kIntervalMin = 15.0;

    /// Rows must be exactly the 96 marks 00:00 ... 23:45 in order.
    explicit DayProfile(std::vector<DayProfileRow> rows);

    std::span<const DayProfileRow> rows() const noexcept { return rows_; }

private:
    std::vector<DayProfileRow> rows_;
};

/// Inertia constants attached to the day-profile source columns.
struct DayProfileColumns {
    static constexpr const char* kNames[] = {"coal",      "natural_gas", "nuclear", "petroleum",
                                             "wind_solar", "hydro",       "other"};
    static constexpr double kInertia[] = {2.6, 4.9, 4.1, 3.6, 0.0, 2.4, 0.0};
    static constexpr std::size_t kCount = 7;
};

/// Builds a mix from per-column MW values in DayProfileColumns order.
GenerationMix day_profile_mix(std::span<const double> column_mw);

/// The dispatch at 20:00 in every row, with a synthetic solar bell (06:00 to
/// 18:00, 8,000 MW peak) displacing natural gas. Not measured data.
DayProfile synthetic_day_profile();

struct DailyRow {
    TimeOfDay clock;
    ChargingStrategy strategy = ChargingStrategy::Immediate;
    ControlMode mode = ControlMode::V1G;
    double participation = 0.0;
    FrequencyMetrics metrics;
};

/// For every interval: grid inertia and base from that interval's mix, fleet
/// state from its clock, then one simulation per (strategy, mode, level).
/// Output is ordered by clock, then strategy, mode, level.
std::vector<DailyRow> daily_nadir_scan(const DayProfile& day, const Scenario& base,
                                       std::span<const double> levels,
                                       std::span<const ControlMode> modes,
                                       const MetricsOptions& metrics = {},
                                       std::span<const ChargingStrategy> strategies = {},
                                       ParallelOptions parallel = {});

}  // namespace evfreq
