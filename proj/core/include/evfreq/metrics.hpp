#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace evfreq {

/// Sampled simulation output. Arrays share one uniform time grid.
struct Trajectory {
    std::vector<double> times_s;
    std::vector<double> frequency_hz;
    /// df/dt from the model right-hand side at each sample (Hz/s). May be
    /// empty for trajectories not produced by the simulator.
    std::vector<double> dfdt_hz_per_s;
    std::vector<double> p_mech_pu;
    std::vector<double> p_ev_pu;
    std::vector<double> mean_soc;
    std::optional<double> latch_time_s;
    double event_time_s = 0.0;
    double f_nominal_hz = 60.0;
    double step_s = 0.0;

    std::size_t size() const noexcept { return times_s.size(); }
    bool empty() const noexcept { return times_s.empty(); }

    /// Frequency-only trajectory on a uniform grid starting at `t0`.
    static Trajectory from_samples(std::vector<double> frequency_hz, double step_s,
                                   double t0 = 0.0, double f_nominal_hz = 60.0);
};

struct MetricsOptions {
    double rocof_window_s = 0.5;
    double settling_band_hz = 0.02;
    double tail_fraction = 0.05;  ///< share of final samples averaged for f_ss
};

struct FrequencyMetrics {
    double nadir_hz = 0.0;
    double nadir_time_s = 0.0;
    double rocof_hz_per_s = 0.0;
    double overshoot_hz = 0.0;
    std::optional<double> settling_time_s;
    double f_steady_state_hz = 0.0;
};

struct Nadir {
    double frequency_hz = 0.0;
    double time_s = 0.0;
};

/// Lowest frequency and its time; ties go to the earliest sample. When the
/// trajectory carries df/dt samples the minimum is refined inside the
/// neighbouring steps with the cubic Hermite interpolant.
Nadir nadir(const Trajectory& traj);

/// Most negative centred difference whose stencil lies in
/// [event_time, event_time + window].
double rocof(const Trajectory& traj, double window_s);

/// Mean of the final `tail_fraction` of frequency samples.
double steady_state_frequency(const Trajectory& traj, double tail_fraction = 0.05);

/// max(0, max_{t > nadir_time} f(t) - f_ss).
double overshoot(const Trajectory& traj, double tail_fraction = 0.05);

/// Earliest sample time after which |f - f_ss| stays within `band_hz`.
std::optional<double> settling_time(const Trajectory& traj, double band_hz,
                                    double tail_fraction = 0.05);

FrequencyMetrics compute_metrics(const Trajectory& traj, const MetricsOptions& options = {});

}  // namespace evfreq
