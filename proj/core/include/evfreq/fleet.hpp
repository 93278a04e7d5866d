#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "evfreq/time_of_day.hpp"

namespace evfreq {

enum class ChargingStrategy { Immediate, Delayed, ConstantMinimumPower };

std::string to_string(ChargingStrategy s);
/// Accepts "immediate", "delayed", "constant" (also "constant_minimum_power").
ChargingStrategy parse_strategy(const std::string& name);
inline constexpr ChargingStrategy kAllStrategies[] = {
    ChargingStrategy::Immediate, ChargingStrategy::Delayed, ChargingStrategy::ConstantMinimumPower};

/// One heavy-duty vehicle type. Defaults reproduce a 700 kWh nightly
/// recharge: 7 h at 100 kW or 14 h at 50 kW.
struct VehicleClass {
    double battery_kwh = 875.0;
    double charger_kw = 100.0;
    double discharge_kw = 100.0;
    double soc_return = 0.2;   ///< SoC on arrival at the depot (shift end)
    double soc_reserve = 0.3;  ///< V2G injection stops at or below this SoC
    TimeOfDay shift_start = TimeOfDay::from_hm(6);
    TimeOfDay shift_end = TimeOfDay::from_hm(16);
    double charging_efficiency = 1.0;  ///< reserved; only 1.0 is supported

    void validate() const;

    double energy_need_kwh() const { return battery_kwh * (1.0 - soc_return); }
    DailyInterval shift() const;
    DailyInterval dwell() const;
};

struct FleetConfig {
    std::int64_t n_vehicles = 15000;
    VehicleClass vehicle;
    ChargingStrategy strategy = ChargingStrategy::Immediate;

    void validate() const;
};

struct FleetState {
    TimeOfDay clock;
    std::int64_t plugged_count = 0;
    double charging_kw_per_vehicle = 0.0;
    double mean_soc = 0.0;
};

struct ChargingWindow {
    DailyInterval interval;
    double power_kw = 0.0;

    TimeOfDay start() const { return interval.start; }
    TimeOfDay end() const { return interval.end(); }
    double duration_h() const { return interval.duration_min / 60.0; }
};

/// Throws InfeasibleError when the energy need exceeds what the charger can
/// deliver during the depot dwell.
ChargingWindow charging_window(ChargingStrategy strategy, const VehicleClass& vehicle);

double charging_power_at(TimeOfDay clock, ChargingStrategy strategy, const VehicleClass& vehicle);

/// Piecewise-linear SoC over the day: linear depletion on shift, soc_return
/// until charging starts, a linear ramp at window power, then full until the
/// next shift.
double soc_at(TimeOfDay clock, ChargingStrategy strategy, const VehicleClass& vehicle);

struct SocSample {
    TimeOfDay clock;
    double soc = 0.0;
};
std::vector<SocSample> soc_trajectory(ChargingStrategy strategy, const VehicleClass& vehicle,
                                      double step_min);

struct ProfileSample {
    TimeOfDay clock;
    double per_vehicle_kw = 0.0;
    double aggregate_mw = 0.0;
    double mean_soc = 0.0;
};
/// 24 h starting at 00:00 in `step_min` increments; `step_min` must divide 1440.
std::vector<ProfileSample> aggregate_profile(const FleetConfig& fleet, double step_min);

FleetState fleet_state_at(TimeOfDay clock, const FleetConfig& fleet);

}  // namespace evfreq
