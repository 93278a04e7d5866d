#include "evfreq/system_model.hpp"

#include <cmath>

#include "evfreq/errors.hpp"

namespace evfreq {

GenerationMix::GenerationMix(std::vector<GenerationSource> sources)
    : sources_(std::move(sources)) {
    if (sources_.empty()) {
        throw DomainError("generation mix is empty");
    }
    double total = 0.0;
    for (const auto& s : sources_) {
        if (!(s.inertia_s >= 0.0) || !std::isfinite(s.inertia_s)) {
            throw DomainError("source '" + s.name + "' has invalid inertia constant");
        }
        if (!(s.power_mw >= 0.0) || !std::isfinite(s.power_mw)) {
            throw DomainError("source '" + s.name + "' has invalid power");
        }
        total += s.power_mw;
    }
    if (!(total > 0.0)) {
        throw DomainError("generation mix has zero total power");
    }
    total_power_mw_ = total;
}

GenerationMix GenerationMix::scaled(double k) const {
    if (!(k > 0.0)) throw DomainError("mix scale factor must be positive");
    auto copy = sources_;
    for (auto& s : copy) s.power_mw *= k;
    return GenerationMix(std::move(copy));
}

GenerationMix table2_mix() {
    return GenerationMix({
        {"coal", 2.6, 1166.0},
        {"natural_gas", 4.9, 12996.0},
        {"nuclear", 4.1, 1147.0},
        {"petroleum", 3.6, 88.0},
        {"wind_solar", 0.0, 809.0},
        {"hydro", 2.4, 3115.0},
        {"other", 0.0, 509.0},
    });
}

double effective_inertia(const GenerationMix& mix) {
    double weighted = 0.0;
    for (const auto& s : mix.sources()) weighted += s.inertia_s * s.power_mw;
    return weighted / mix.total_power_mw();
}

double inertia_preset_value(InertiaPreset preset) {
    switch (preset) {
        case InertiaPreset::Table2Reported: return kTable2ReportedInertia;
        case InertiaPreset::Table2Weighted: return effective_inertia(table2_mix());
    }
    throw DomainError("unknown inertia preset");
}

std::string to_string(InertiaPreset preset) {
    switch (preset) {
        case InertiaPreset::Table2Reported: return "table2_reported";
        case InertiaPreset::Table2Weighted: return "table2_weighted";
    }
    return "unknown";
}

InertiaPreset parse_inertia_preset(const std::string& name) {
    if (name == "table2_reported") return InertiaPreset::Table2Reported;
    if (name == "table2_weighted") return InertiaPreset::Table2Weighted;
    throw DomainError("unknown inertia preset '" + name +
                      "' (valid: table2_reported, table2_weighted)");
}

void GridParameters::validate() const {
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!positive(f_nominal_hz)) throw DomainError("f_nominal must be > 0");
    if (!positive(h_eff_s)) throw DomainError("h_eff must be > 0");
    if (!positive(droop_pu)) throw DomainError("droop R must be > 0");
    if (!std::isfinite(damping_pu) || damping_pu < 0.0) throw DomainError("damping D must be >= 0");
    if (!positive(t_governor_s) || !positive(t_turbine_s) || !positive(t_ev_s)) {
        throw DomainError("time constants must be > 0");
    }
    if (!positive(s_base_mw)) throw DomainError("s_base must be > 0");
}

GridParameters GridParameters::with_mix(const GenerationMix& mix) const {
    GridParameters p = *this;
    p.h_eff_s = effective_inertia(mix);
    p.s_base_mw = mix.total_power_mw();
    return p;
}

double to_per_unit(double power_mw, const GridParameters& params) {
    return power_mw / params.s_base_mw;
}

GridStateDerivative swing_derivative(const GridState& x, double disturbance_pu,
                                     double ev_command_pu, const GridParameters& p) {
    GridStateDerivative d;
    d.delta_f = (x.p_mech + x.p_ev - disturbance_pu - p.damping_pu * x.delta_f) / (2.0 * p.h_eff_s);
    d.p_gov = (-x.delta_f / p.droop_pu - x.p_gov) / p.t_governor_s;
    d.p_mech = (x.p_gov - x.p_mech) / p.t_turbine_s;
    d.p_ev = (ev_command_pu - x.p_ev) / p.t_ev_s;
    return d;
}

double steady_state_deviation_hz(double net_disturbance_pu, const GridParameters& p) {
    const double stiffness = p.damping_pu + 1.0 / p.droop_pu;
    if (!(stiffness > 0.0) || !std::isfinite(stiffness)) {
        throw DomainError("D + 1/R must be positive");
    }
    return -p.f_nominal_hz * net_disturbance_pu / stiffness;
}

}  // namespace evfreq
