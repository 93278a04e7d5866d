#include "evfreq/fleet.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "evfreq/errors.hpp"

namespace evfreq {

namespace {

std::size_t steps_per_day(double step_min) {
    if (!(step_min > 0.0) || !std::isfinite(step_min)) {
        throw DomainError("profile step must be > 0");
    }
    const double n = kMinutesPerDay / step_min;
    const double rounded = std::round(n);
    if (std::abs(n - rounded) > 1e-9 * n) {
        throw DomainError("profile step must divide 24 h");
    }
    return static_cast<std::size_t>(rounded);
}

}  // namespace

std::string to_string(ChargingStrategy s) {
    switch (s) {
        case ChargingStrategy::Immediate: return "immediate";
        case ChargingStrategy::Delayed: return "delayed";
        case ChargingStrategy::ConstantMinimumPower: return "constant";
    }
    return "unknown";
}

ChargingStrategy parse_strategy(const std::string& name) {
    if (name == "immediate") return ChargingStrategy::Immediate;
    if (name == "delayed") return ChargingStrategy::Delayed;
    if (name == "constant" || name == "constant_minimum_power") {
        return ChargingStrategy::ConstantMinimumPower;
    }
    throw DomainError("unknown charging strategy '" + name +
                      "' (valid: immediate, delayed, constant)");
}

void VehicleClass::validate() const {
    auto fraction = [](double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; };
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!positive(battery_kwh)) throw DomainError("battery capacity must be > 0");
    if (!positive(charger_kw)) throw DomainError("charger rating must be > 0");
    if (!positive(discharge_kw)) throw DomainError("discharge rating must be > 0");
    if (!fraction(soc_return) || !fraction(soc_reserve)) {
        throw DomainError("soc_return and soc_reserve must lie in [0, 1]");
    }
    if (charging_efficiency != 1.0) {
        throw DomainError("only charging_efficiency = 1.0 is supported");
    }
    if (shift().duration_min <= 0.0) {
        throw DomainError("shift start and end must differ");
    }
}

DailyInterval VehicleClass::shift() const {
    return {shift_start, shift_start.minutes_until(shift_end)};
}

DailyInterval VehicleClass::dwell() const {
    return {shift_end, shift_end.minutes_until(shift_start)};
}

void FleetConfig::validate() const {
    if (n_vehicles < 0) throw DomainError("n_vehicles must be >= 0");
    vehicle.validate();
}

ChargingWindow charging_window(ChargingStrategy strategy, const VehicleClass& v) {
    const double need = v.energy_need_kwh();
    const DailyInterval dwell = v.dwell();
    const double dwell_h = dwell.duration_min / 60.0;
    const double deliverable = v.charger_kw * dwell_h;
    // Small slack so 700 kWh in exactly 7 h at 100 kW is not rejected by rounding.
    if (need > deliverable * (1.0 + 1e-12)) {
        const double deficit = need - deliverable;
        char buf[200];
        std::snprintf(buf, sizeof buf,
                      "energy need %.3f kWh exceeds %.3f kWh deliverable in the %.3f h dwell "
                      "(deficit %.3f kWh)",
                      need, deliverable, dwell_h, deficit);
        throw InfeasibleError(buf, deficit);
    }
    const double full_power_min = 60.0 * need / v.charger_kw;
    switch (strategy) {
        case ChargingStrategy::Immediate:
            return {{v.shift_end, full_power_min}, v.charger_kw};
        case ChargingStrategy::Delayed:
            return {{v.shift_start.plus_minutes(-full_power_min), full_power_min}, v.charger_kw};
        case ChargingStrategy::ConstantMinimumPower:
            return {dwell, need / dwell_h};
    }
    throw DomainError("unknown charging strategy");
}

double charging_power_at(TimeOfDay clock, ChargingStrategy strategy, const VehicleClass& v) {
    const ChargingWindow w = charging_window(strategy, v);
    if (!v.dwell().contains(clock)) return 0.0;
    return w.interval.contains(clock) ? w.power_kw : 0.0;
}

double soc_at(TimeOfDay clock, ChargingStrategy strategy, const VehicleClass& v) {
    const DailyInterval shift = v.shift();
    if (shift.contains(clock)) {
        const double frac = shift.elapsed(clock) / shift.duration_min;
        return 1.0 - (1.0 - v.soc_return) * frac;
    }
    const ChargingWindow w = charging_window(strategy, v);
    const DailyInterval dwell = v.dwell();
    const double since_arrival = dwell.elapsed(clock);
    const double window_offset = dwell.elapsed(w.start());
    const double charged_min =
        std::clamp(since_arrival - window_offset, 0.0, w.interval.duration_min);
    const double soc = v.soc_return + w.power_kw * (charged_min / 60.0) / v.battery_kwh;
    return std::min(soc, 1.0);
}

std::vector<SocSample> soc_trajectory(ChargingStrategy strategy, const VehicleClass& v,
                                      double step_min) {
    const std::size_t n = steps_per_day(step_min);
    std::vector<SocSample> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto clock = TimeOfDay::from_minutes(static_cast<double>(i) * step_min);
        out.push_back({clock, soc_at(clock, strategy, v)});
    }
    return out;
}

std::vector<ProfileSample> aggregate_profile(const FleetConfig& fleet, double step_min) {
    fleet.validate();
    const std::size_t n = steps_per_day(step_min);
    std::vector<ProfileSample> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto clock = TimeOfDay::from_minutes(static_cast<double>(i) * step_min);
        const double kw = charging_power_at(clock, fleet.strategy, fleet.vehicle);
        out.push_back({clock, kw, static_cast<double>(fleet.n_vehicles) * kw / 1000.0,
                       soc_at(clock, fleet.strategy, fleet.vehicle)});
    }
    return out;
}

FleetState fleet_state_at(TimeOfDay clock, const FleetConfig& fleet) {
    FleetState s;
    s.clock = clock;
    s.plugged_count = fleet.vehicle.dwell().contains(clock) ? fleet.n_vehicles : 0;
    s.charging_kw_per_vehicle =
        s.plugged_count > 0 ? charging_power_at(clock, fleet.strategy, fleet.vehicle) : 0.0;
    s.mean_soc = soc_at(clock, fleet.strategy, fleet.vehicle);
    return s;
}

}  // namespace evfreq
