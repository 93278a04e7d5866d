#pragma once

#include <span>
#include <string>
#include <vector>

namespace evfreq {

/// One generation technology in the dispatch. Inverter-based sources carry
/// zero inertia.
struct GenerationSource {
    std::string name;
    double inertia_s = 0.0;  ///< H, seconds on the unit's own rating
    double power_mw = 0.0;
};

/// A validated set of sources. Construction rejects an empty mix, negative
/// entries and zero total output.
class GenerationMix {
public:
    explicit GenerationMix(std::vector<GenerationSource> sources);

    std::span<const GenerationSource> sources() const noexcept { return sources_; }
    double total_power_mw() const noexcept { return total_power_mw_; }

    /// Same mix with every source output multiplied by `k` (> 0).
    GenerationMix scaled(double k) const;

private:
    std::vector<GenerationSource> sources_;
    double total_power_mw_ = 0.0;
};

/// California dispatch at 20:00 on 28 Feb 2021 (seven source rows, 19,830 MW).
GenerationMix table2_mix();

/// Published effective inertia for that dispatch; the weighted sum of its rows is lower.
inline constexpr double kTable2ReportedInertia = 6.4;
inline constexpr double kTable2TotalPowerMw = 19830.0;

enum class InertiaPreset { Table2Reported, Table2Weighted };

/// Power-weighted mean inertia constant, sum(H_i P_i) / sum(P_i).
double effective_inertia(const GenerationMix& mix);

double inertia_preset_value(InertiaPreset preset);
std::string to_string(InertiaPreset preset);
InertiaPreset parse_inertia_preset(const std::string& name);

struct GridParameters {
    double f_nominal_hz = 60.0;
    double h_eff_s = kTable2ReportedInertia;
    double damping_pu = 1.0;  ///< D, load sensitivity to frequency
    double droop_pu = 0.05;   ///< R
    double t_governor_s = 0.2;
    double t_turbine_s = 0.5;
    double t_ev_s = 0.1;
    double s_base_mw = kTable2TotalPowerMw;

    /// Throws DomainError when any invariant fails.
    void validate() const;

    /// Copy with h_eff and s_base taken from `mix`.
    GridParameters with_mix(const GenerationMix& mix) const;
};

double to_per_unit(double power_mw, const GridParameters& params);

/// Aggregated single-area state. All power terms are per unit of s_base and
/// signed as deviations from the pre-event operating point.
struct GridState {
    double delta_f = 0.0;  ///< frequency deviation, pu of f_nominal
    double p_gov = 0.0;    ///< governor valve output
    double p_mech = 0.0;   ///< turbine mechanical power
    double p_ev = 0.0;     ///< realized EV support (positive helps the grid)
    double mean_soc = 0.0;

    double frequency_hz(const GridParameters& params) const {
        return params.f_nominal_hz * (1.0 + delta_f);
    }
};

struct GridStateDerivative {
    double delta_f = 0.0;
    double p_gov = 0.0;
    double p_mech = 0.0;
    double p_ev = 0.0;
    double mean_soc = 0.0;  ///< filled by the fleet coupling, zero here
};

/// Right-hand side of swing equation + first-order governor + first-order
/// turbine + droop + load damping + first-order EV actuator.
/// `disturbance_pu` is positive for lost generation; `ev_command_pu` is the
/// requested EV support.
GridStateDerivative swing_derivative(const GridState& state, double disturbance_pu,
                                     double ev_command_pu, const GridParameters& params);

/// Equilibrium frequency deviation in Hz once droop and damping have absorbed
/// `net_disturbance_pu`: -f0 * dP / (D + 1/R).
double steady_state_deviation_hz(double net_disturbance_pu, const GridParameters& params);

}  // namespace evfreq
