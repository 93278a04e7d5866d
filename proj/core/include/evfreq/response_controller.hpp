#pragma once

#include <optional>
#include <string>

#include "evfreq/fleet.hpp"

namespace evfreq {

enum class ControlMode { V1G, V2G };

std::string to_string(ControlMode m);
ControlMode parse_mode(const std::string& name);
inline constexpr ControlMode kAllModes[] = {ControlMode::V1G, ControlMode::V2G};

struct ControllerConfig {
    double threshold_hz = 59.7;
    double participation = 0.0;  ///< fraction of plugged vehicles enrolled
    ControlMode mode = ControlMode::V1G;
    /// When true the trigger is one-shot and holds to the end of the run.
    /// When false the response is active only while frequency is below threshold.
    bool latch = true;
    /// V2G vehicles also drop their charging load before injecting.
    bool v2g_includes_shed = true;

    void validate(double f_nominal_hz) const;
};

struct EventLatch {
    bool triggered = false;
    std::optional<double> trigger_time_s;

    static EventLatch fired_at(double t) { return {true, t}; }
};

EventLatch detect_event(double frequency_hz, const ControllerConfig& config,
                        const EventLatch& latch, double now_s);

/// Commanded EV support in MW, positive meaning help to the grid.
double ev_power_command(const EventLatch& latch, const ControllerConfig& config,
                        const FleetState& state, const FleetConfig& fleet);

/// d(mean_soc)/dt in 1/s given the commanded support. Vehicles that are not
/// responding keep charging at the window power.
double soc_rate_under_command(double command_mw, const FleetState& state,
                              const FleetConfig& fleet);

}  // namespace evfreq
