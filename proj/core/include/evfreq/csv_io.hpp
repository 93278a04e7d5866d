#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "evfreq/fleet.hpp"
#include "evfreq/metrics.hpp"
#include "evfreq/simulator.hpp"
#include "evfreq/system_model.hpp"

namespace evfreq {

// Readers skip blank lines and lines starting with '#' ahead of the header and
// throw InputError with the 1-based line number on malformed content.

inline constexpr std::string_view kMixHeader = "source,h_seconds,power_mw";
inline constexpr std::string_view kDayProfileHeader =
    "clock_min,coal_mw,natural_gas_mw,nuclear_mw,petroleum_mw,wind_solar_mw,hydro_mw,other_mw";
inline constexpr std::string_view kTrajectoryHeader = "t_s,f_hz,p_mech_pu,p_ev_pu,mean_soc";
inline constexpr std::string_view kProfileHeader = "clock_min,per_vehicle_kw,aggregate_mw,mean_soc";
inline constexpr std::string_view kMetricsHeader =
    "scenario_id,mode,participation,strategy,clock_min,nadir_hz,nadir_s,rocof_hzps,overshoot_hz,"
    "settling_s,f_ss_hz";

GenerationMix read_mix_csv(std::istream& in);
GenerationMix load_mix_csv(const std::filesystem::path& path);

/// Rows may come in any order; each 15-minute mark must appear exactly once.
DayProfile read_day_profile_csv(std::istream& in);
DayProfile load_day_profile_csv(const std::filesystem::path& path);
void write_day_profile_csv(std::ostream& out, const DayProfile& day);

/// Six decimals, no negative zero.
std::string format_fixed(double value, int decimals = 6);

void write_trajectory_rows(std::ostream& out, const Trajectory& traj);
void write_profile_rows(std::ostream& out, std::span<const ProfileSample> profile);

struct MetricsRecord {
    std::size_t scenario_id = 0;
    ControlMode mode = ControlMode::V1G;
    double participation = 0.0;
    ChargingStrategy strategy = ChargingStrategy::Immediate;
    TimeOfDay clock;
    FrequencyMetrics metrics;
};
/// Unsettled runs leave `settling_s` empty.
void write_metrics_row(std::ostream& out, const MetricsRecord& record);

}  // namespace evfreq
