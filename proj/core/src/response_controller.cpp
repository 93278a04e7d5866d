#include "evfreq/response_controller.hpp"

#include <cmath>

#include "evfreq/errors.hpp"

namespace evfreq {

std::string to_string(ControlMode m) {
    return m == ControlMode::V1G ? "v1g" : "v2g";
}

ControlMode parse_mode(const std::string& name) {
    if (name == "v1g" || name == "V1G") return ControlMode::V1G;
    if (name == "v2g" || name == "V2G") return ControlMode::V2G;
    throw DomainError("unknown control mode '" + name + "' (valid: v1g, v2g)");
}

void ControllerConfig::validate(double f_nominal_hz) const {
    if (!std::isfinite(participation) || participation < 0.0 || participation > 1.0) {
        throw DomainError("participation must lie in [0, 1]");
    }
    if (!std::isfinite(threshold_hz) || threshold_hz <= 0.0 || threshold_hz >= f_nominal_hz) {
        throw DomainError("threshold must lie in (0, f_nominal)");
    }
}

EventLatch detect_event(double frequency_hz, const ControllerConfig& config,
                        const EventLatch& latch, double now_s) {
    const bool below = frequency_hz < config.threshold_hz;
    if (config.latch) {
        if (latch.triggered) return latch;
        return below ? EventLatch::fired_at(now_s) : EventLatch{};
    }
    if (!below) return EventLatch{};
    return latch.triggered ? latch : EventLatch::fired_at(now_s);
}

double ev_power_command(const EventLatch& latch, const ControllerConfig& config,
                        const FleetState& state, const FleetConfig& fleet) {
    if (!latch.triggered || state.plugged_count <= 0) return 0.0;
    const double responders = config.participation * static_cast<double>(state.plugged_count);

    double per_vehicle_kw = 0.0;
    if (config.mode == ControlMode::V1G) {
        per_vehicle_kw = state.charging_kw_per_vehicle;
    } else {
        if (config.v2g_includes_shed) per_vehicle_kw += state.charging_kw_per_vehicle;
        if (state.mean_soc > fleet.vehicle.soc_reserve) per_vehicle_kw += fleet.vehicle.discharge_kw;
    }
    return responders * per_vehicle_kw / 1000.0;
}

double soc_rate_under_command(double command_mw, const FleetState& state,
                              const FleetConfig& fleet) {
    if (state.plugged_count <= 0) return 0.0;
    const double support_kw = command_mw * 1000.0 / static_cast<double>(state.plugged_count);
    const double net_discharge_kw = support_kw - state.charging_kw_per_vehicle;
    return -net_discharge_kw / (fleet.vehicle.battery_kwh * 3600.0);
}

}  // namespace evfreq
