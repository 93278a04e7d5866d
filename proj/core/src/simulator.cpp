#include "evfreq/simulator.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <string>
#include <thread>

#include "evfreq/errors.hpp"

namespace evfreq {

namespace {

// delta_f, p_gov, p_mech, p_ev, mean_soc
using StateVec = std::array<double, 5>;

struct StepInputs {
    double disturbance_pu = 0.0;
    double command_pu = 0.0;
    double soc_rate = 0.0;
};

GridState unpack(const StateVec& x) { return {x[0], x[1], x[2], x[3], x[4]}; }

StateVec rhs(const StateVec& x, const StepInputs& in, const GridParameters& p) {
    const GridStateDerivative d = swing_derivative(unpack(x), in.disturbance_pu, in.command_pu, p);
    return {d.delta_f, d.p_gov, d.p_mech, d.p_ev, in.soc_rate};
}

StateVec axpy(const StateVec& x, double a, const StateVec& k) {
    StateVec out;
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + a * k[i];
    return out;
}

StateVec rk4(const StateVec& x, double h, const StepInputs& in, const GridParameters& p) {
    if (h <= 0.0) return x;
    const StateVec k1 = rhs(x, in, p);
    const StateVec k2 = rhs(axpy(x, 0.5 * h, k1), in, p);
    const StateVec k3 = rhs(axpy(x, 0.5 * h, k2), in, p);
    const StateVec k4 = rhs(axpy(x, h, k3), in, p);
    StateVec out;
    for (std::size_t i = 0; i < x.size(); ++i) {
        out[i] = x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return out;
}

bool finite(const StateVec& x) {
    return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

double hermite(double y0, double y1, double m0, double m1, double s) {
    const double s2 = s * s;
    const double s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * m0 + (-2 * s3 + 3 * s2) * y1 +
           (s3 - s2) * m1;
}

// Fraction of the step at which delta_f first falls below `target`, found by
// bisection on the cubic Hermite interpolant of the step.
double crossing_fraction(double y0, double y1, double m0, double m1, double target) {
    if (y0 < target) return 0.0;
    double lo = 0.0;
    double hi = 1.0;
    for (int it = 0; it < 64; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (hermite(y0, y1, m0, m1, mid) < target) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

class Integrator {
public:
    explicit Integrator(const Scenario& s)
        : scenario_(s),
          grid_(s.effective_grid()),
          base_state_(fleet_state_at(s.clock, s.fleet)),
          disturbance_pu_(to_per_unit(s.disturbance_mw, grid_)) {}

    Trajectory run() {
        const std::size_t n = scenario_.step_count();
        const double h = scenario_.step_s;
        const double t0 = -scenario_.pre_event_padding_s;

        Trajectory traj;
        traj.event_time_s = scenario_.event_time_s;
        traj.f_nominal_hz = grid_.f_nominal_hz;
        traj.step_s = h;
        for (auto* v : {&traj.times_s, &traj.frequency_hz, &traj.dfdt_hz_per_s, &traj.p_mech_pu,
                        &traj.p_ev_pu, &traj.mean_soc}) {
            v->reserve(n + 1);
        }

        StateVec x{0.0, 0.0, 0.0, 0.0, base_state_.mean_soc};
        EventLatch latch;
        record(traj, t0, x);
        latch = detect_event(frequency(x), scenario_.controller, latch, t0);

        for (std::size_t k = 0; k < n; ++k) {
            const double ta = t0 + static_cast<double>(k) * h;
            const double tb = t0 + static_cast<double>(k + 1) * h;
            StateVec next = advance(x, ta, tb, latch);
            if (!finite(next)) {
                throw IntegrationError(
                    "non-finite state at step " + std::to_string(k + 1) + " (t = " +
                        std::to_string(tb) + " s)", k + 1);
            }
            EventLatch updated = detect_event(frequency(next), scenario_.controller, latch, tb);
            if (!latch.triggered && updated.triggered) {
                const double tc = locate_crossing(x, next, ta, tb);
                if (tc < tb) {
                    EventLatch fired = updated;
                    fired.trigger_time_s = tc;
                    const StateVec mid = advance(x, ta, tc, latch);
                    next = advance(mid, tc, tb, fired);
                    updated = fired;
                }
                if (!traj.latch_time_s) traj.latch_time_s = updated.trigger_time_s;
            }
            latch = updated;
            x = next;
            record(traj, tb, x);
        }
        return traj;
    }

private:
    double frequency(const StateVec& x) const { return grid_.f_nominal_hz * (1.0 + x[0]); }

    bool disturbed(double t) const {
        return t >= scenario_.event_time_s - 1e-9 * scenario_.step_s;
    }

    StepInputs inputs(double t, const StateVec& x, const EventLatch& latch) const {
        FleetState fs = base_state_;
        fs.mean_soc = x[4];
        const double command_mw = ev_power_command(latch, scenario_.controller, fs, scenario_.fleet);
        StepInputs in;
        in.disturbance_pu = disturbed(t) ? disturbance_pu_ : 0.0;
        in.command_pu = to_per_unit(command_mw, grid_);
        in.soc_rate = soc_rate_under_command(command_mw, fs, scenario_.fleet);
        if (in.soc_rate > 0.0 && x[4] >= 1.0) in.soc_rate = 0.0;
        return in;
    }

    // Integrates [ta, tb] with inputs held from ta, splitting at the event
    // time when it falls strictly inside the interval.
    StateVec advance(const StateVec& x, double ta, double tb, const EventLatch& latch) const {
        const double te = scenario_.event_time_s;
        const double eps = 1e-9 * scenario_.step_s;
        if (te > ta + eps && te < tb - eps) {
            const StateVec mid = rk4(x, te - ta, inputs(ta, x, latch), grid_);
            return rk4(mid, tb - te, inputs(te, mid, latch), grid_);
        }
        return rk4(x, tb - ta, inputs(ta, x, latch), grid_);
    }

    double locate_crossing(const StateVec& xa, const StateVec& xb, double ta, double tb) const {
        const double te = scenario_.event_time_s;
        if (te > ta && te < tb) return tb;  // derivative jumps inside the step
        const double h = tb - ta;
        const StepInputs in = inputs(ta, xa, EventLatch{});
        const double m0 = h * rhs(xa, in, grid_)[0];
        const double m1 = h * rhs(xb, in, grid_)[0];
        const double target = scenario_.controller.threshold_hz / grid_.f_nominal_hz - 1.0;
        return ta + h * crossing_fraction(xa[0], xb[0], m0, m1, target);
    }

    void record(Trajectory& traj, double t, const StateVec& x) const {
        StepInputs in;
        in.disturbance_pu = disturbed(t) ? disturbance_pu_ : 0.0;
        traj.times_s.push_back(t);
        traj.frequency_hz.push_back(frequency(x));
        traj.dfdt_hz_per_s.push_back(grid_.f_nominal_hz * rhs(x, in, grid_)[0]);
        traj.p_mech_pu.push_back(x[2]);
        traj.p_ev_pu.push_back(x[3]);
        traj.mean_soc.push_back(x[4]);
    }

    const Scenario& scenario_;
    GridParameters grid_;
    FleetState base_state_;
    double disturbance_pu_;
};

void parallel_for(std::size_t count, ParallelOptions opts,
                  const std::function<void(std::size_t)>& body) {
    unsigned jobs = opts.jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : opts.jobs;
    jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(count, 1)));
    if (jobs <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    workers.reserve(jobs);
    for (unsigned w = 0; w < jobs; ++w) {
        workers.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (auto& t : workers) t.join();
    // Rethrow the failure of the lowest cell so the error does not depend on scheduling.
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

std::vector<ChargingStrategy> strategies_or_base(std::span<const ChargingStrategy> strategies,
                                                 const Scenario& base) {
    if (strategies.empty()) return {base.fleet.strategy};
    return {strategies.begin(), strategies.end()};
}

void check_levels(std::span<const double> levels, std::span<const ControlMode> modes) {
    if (levels.empty()) throw DomainError("participation levels must be nonempty");
    if (modes.empty()) throw DomainError("control modes must be nonempty");
    for (double l : levels) {
        if (!std::isfinite(l) || l < 0.0 || l > 1.0) {
            throw DomainError("participation level " + std::to_string(l) + " outside [0, 1]");
        }
    }
}

}  // namespace

GridParameters Scenario::effective_grid() const {
    GridParameters g = mix ? grid.with_mix(*mix) : grid;
    if (h_eff_override_s) g.h_eff_s = *h_eff_override_s;
    return g;
}

std::size_t Scenario::step_count() const {
    if (!(step_s > 0.0) || !std::isfinite(step_s)) throw DomainError("step must be > 0");
    const double span = horizon_s + pre_event_padding_s;
    const double n = span / step_s;
    const double rounded = std::round(n);
    if (!std::isfinite(n) || std::abs(n - rounded) > 1e-6 * std::max(1.0, n)) {
        throw DomainError("horizon (plus padding) must be a whole number of steps");
    }
    return static_cast<std::size_t>(rounded);
}

void Scenario::validate() const {
    const GridParameters g = effective_grid();
    g.validate();
    fleet.validate();
    controller.validate(g.f_nominal_hz);
    if (!(step_s > 0.0)) throw DomainError("step must be > 0");
    if (!(horizon_s >= 10.0 * step_s)) throw DomainError("horizon must cover at least 10 steps");
    if (!std::isfinite(disturbance_mw) || disturbance_mw < 0.0) {
        throw DomainError("disturbance must be >= 0");
    }
    if (!(event_time_s >= 0.0) || !(event_time_s < horizon_s)) {
        throw DomainError("event time must lie in [0, horizon)");
    }
    if (!std::isfinite(pre_event_padding_s) || pre_event_padding_s < 0.0) {
        throw DomainError("pre-event padding must be >= 0");
    }
    (void)step_count();
    (void)charging_window(fleet.strategy, fleet.vehicle);
}

Trajectory simulate(const Scenario& scenario) {
    scenario.validate();
    return Integrator(scenario).run();
}

std::vector<SweepRow> participation_sweep(const Scenario& base, std::span<const double> levels,
                                          std::span<const ControlMode> modes,
                                          const MetricsOptions& metrics,
                                          std::span<const ChargingStrategy> strategies,
                                          ParallelOptions parallel) {
    check_levels(levels, modes);
    const auto strats = strategies_or_base(strategies, base);
    std::vector<SweepRow> rows;
    rows.reserve(strats.size() * modes.size() * levels.size());
    for (auto s : strats) {
        for (auto m : modes) {
            for (double l : levels) rows.push_back({s, m, l, {}});
        }
    }
    parallel_for(rows.size(), parallel, [&](std::size_t i) {
        Scenario sc = base;
        sc.fleet.strategy = rows[i].strategy;
        sc.controller.mode = rows[i].mode;
        sc.controller.participation = rows[i].participation;
        rows[i].metrics = compute_metrics(simulate(sc), metrics);
    });
    return rows;
}

DayProfile::DayProfile(std::vector<DayProfileRow> rows) : rows_(std::move(rows)) {
    if (rows_.size() != kIntervals) {
        throw InputError("day profile must have exactly 96 rows, got " +
                         std::to_string(rows_.size()));
    }
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        const double expected = kIntervalMin * static_cast<double>(i);
        if (std::abs(rows_[i].clock.minutes() - expected) > 1e-9) {
            throw InputError("day profile row " + std::to_string(i + 1) + " has clock " +
                                 rows_[i].clock.to_string() + ", expected " +
                                 TimeOfDay::from_minutes(expected).to_string(),
                             i + 1);
        }
    }
}

GenerationMix day_profile_mix(std::span<const double> column_mw) {
    if (column_mw.size() != DayProfileColumns::kCount) {
        throw DomainError("day profile row needs 7 source columns");
    }
    std::vector<GenerationSource> sources;
    sources.reserve(DayProfileColumns::kCount);
    for (std::size_t c = 0; c < DayProfileColumns::kCount; ++c) {
        sources.push_back({DayProfileColumns::kNames[c], DayProfileColumns::kInertia[c], column_mw[c]});
    }
    return GenerationMix(std::move(sources));
}

DayProfile synthetic_day_profile() {
    constexpr double kPi = 3.14159265358979323846;
    constexpr double kSolarPeakMw = 8000.0;
    const GenerationMix base = table2_mix();
    std::vector<double> evening;
    for (const auto& s : base.sources()) evening.push_back(s.power_mw);

    std::vector<DayProfileRow> rows;
    rows.reserve(DayProfile::kIntervals);
    for (std::size_t i = 0; i < DayProfile::kIntervals; ++i) {
        const double minutes = DayProfile::kIntervalMin * static_cast<double>(i);
        const double hour = minutes / 60.0;
        double solar = 0.0;
        if (hour > 6.0 && hour < 18.0) {
            solar = std::round(kSolarPeakMw * std::sin(kPi * (hour - 6.0) / 12.0));
        }
        std::vector<double> cols = evening;
        cols[1] -= solar;  // natural gas
        cols[4] += solar;  // wind + solar
        rows.push_back({TimeOfDay::from_minutes(minutes), day_profile_mix(cols)});
    }
    return DayProfile(std::move(rows));
}

std::vector<DailyRow> daily_nadir_scan(const DayProfile& day, const Scenario& base,
                                       std::span<const double> levels,
                                       std::span<const ControlMode> modes,
                                       const MetricsOptions& metrics,
                                       std::span<const ChargingStrategy> strategies,
                                       ParallelOptions parallel) {
    check_levels(levels, modes);
    const auto strats = strategies_or_base(strategies, base);
    std::vector<DailyRow> rows;
    std::vector<std::size_t> interval;
    const auto profile = day.rows();
    for (std::size_t r = 0; r < profile.size(); ++r) {
        for (auto s : strats) {
            for (auto m : modes) {
                for (double l : levels) {
                    rows.push_back({profile[r].clock, s, m, l, {}});
                    interval.push_back(r);
                }
            }
        }
    }
    parallel_for(rows.size(), parallel, [&](std::size_t i) {
        Scenario sc = base;
        sc.mix = profile[interval[i]].mix;
        sc.h_eff_override_s.reset();
        sc.clock = rows[i].clock;
        sc.fleet.strategy = rows[i].strategy;
        sc.controller.mode = rows[i].mode;
        sc.controller.participation = rows[i].participation;
        rows[i].metrics = compute_metrics(simulate(sc), metrics);
    });
    return rows;
}

}  // namespace evfreq
