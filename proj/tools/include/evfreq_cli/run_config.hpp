#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "evfreq/errors.hpp"
#include "evfreq/fleet.hpp"
#include "evfreq/metrics.hpp"
#include "evfreq/response_controller.hpp"
#include "evfreq/simulator.hpp"

namespace evfreq::cli {

/// Bad configuration value or unreadable config file.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Everything a command needs, after defaults and overrides are applied.
struct RunConfig {
    Scenario scenario;
    /// auto, table2_reported, table2_weighted, mix or custom (uses h_eff_s).
    /// `auto` resolves to `mix` when a mix file is given, else table2_reported.
    std::string h_preset = "auto";
    /// Kept in percent so echoed values reproduce the run bit for bit.
    double participation_pct = 0.0;
    std::optional<std::string> mix_csv;
    MetricsOptions metrics;
    std::vector<double> levels_pct{20.0, 40.0, 60.0, 80.0, 100.0};
    std::vector<ControlMode> modes{ControlMode::V1G, ControlMode::V2G};
    /// Empty means the fleet strategy only.
    std::vector<ChargingStrategy> strategies;
    std::optional<std::string> day_profile_csv;
    double profile_step_min = 15.0;

    std::vector<double> level_fractions() const;
};

/// Builds a config from a (possibly partial) JSON document; omitted keys keep
/// their defaults and unknown keys are rejected.
RunConfig parse_run_config(const nlohmann::json& doc);

/// Effective configuration, with derived values (h_eff_s, s_base_mw)
/// resolved. Feeding it back through parse_run_config reproduces the run.
nlohmann::json to_json(const RunConfig& config);

/// Reads either a JSON document or the `# /pointer = value` provenance block
/// at the top of any CSV this tool wrote.
nlohmann::json load_config_document(const std::filesystem::path& path);

/// Loads the mix file (if any) and resolves the inertia preset into the
/// scenario. Call after every override.
void resolve(RunConfig& config);

/// Provenance block: "# evfreq <command>" then one "# /pointer = value" line
/// per flattened key of to_json(config).
std::string provenance_header(const std::string& command, const RunConfig& config);

}  // namespace evfreq::cli
