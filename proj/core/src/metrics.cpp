#include "evfreq/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "evfreq/errors.hpp"

namespace evfreq {

namespace {

void require_nonempty(const Trajectory& traj) {
    if (traj.empty() || traj.frequency_hz.size() != traj.times_s.size()) {
        throw DomainError("trajectory is empty or malformed");
    }
}

std::size_t tail_count(std::size_t n, double fraction) {
    if (!(fraction > 0.0) || fraction > 1.0) throw DomainError("tail fraction must lie in (0, 1]");
    const auto k = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n) - 1e-9));
    return std::clamp<std::size_t>(k, 1, n);
}

double hermite(double y0, double y1, double m0, double m1, double s) {
    const double s2 = s * s;
    const double s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * m0 + (-2 * s3 + 3 * s2) * y1 +
           (s3 - s2) * m1;
}

// Interior stationary points of the Hermite cubic on [0, 1].
int stationary_points(double y0, double y1, double m0, double m1, std::array<double, 2>& out) {
    const double a = 6 * y0 + 3 * m0 - 6 * y1 + 3 * m1;
    const double b = -6 * y0 - 4 * m0 + 6 * y1 - 2 * m1;
    const double c = m0;
    int n = 0;
    auto keep = [&](double s) {
        if (s > 0.0 && s < 1.0) out[n++] = s;
    };
    const double scale = std::abs(a) + std::abs(b) + std::abs(c);
    if (scale == 0.0) return 0;
    if (std::abs(a) <= 1e-14 * scale) {
        if (b != 0.0) keep(-c / b);
        return n;
    }
    const double disc = b * b - 4 * a * c;
    if (disc < 0.0) return 0;
    const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    if (q != 0.0) keep(c / q);
    keep(q / a);
    return n;
}

}  // namespace

Trajectory Trajectory::from_samples(std::vector<double> frequency_hz, double step_s, double t0,
                                    double f_nominal_hz) {
    Trajectory t;
    t.times_s.resize(frequency_hz.size());
    for (std::size_t i = 0; i < frequency_hz.size(); ++i) {
        t.times_s[i] = t0 + static_cast<double>(i) * step_s;
    }
    t.frequency_hz = std::move(frequency_hz);
    t.event_time_s = t0;
    t.f_nominal_hz = f_nominal_hz;
    t.step_s = step_s;
    return t;
}

Nadir nadir(const Trajectory& traj) {
    require_nonempty(traj);
    const auto& f = traj.frequency_hz;
    const auto& t = traj.times_s;
    const std::size_t i =
        static_cast<std::size_t>(std::min_element(f.begin(), f.end()) - f.begin());
    Nadir best{f[i], t[i]};

    if (traj.dfdt_hz_per_s.size() != f.size()) return best;
    const double eps = 1e-9 * std::max(traj.step_s, 1e-12);
    const std::size_t first = i > 0 ? i - 1 : i;
    for (std::size_t j = first; j <= i && j + 1 < f.size(); ++j) {
        if (t[j] < traj.event_time_s - eps) continue;  // derivative jumps at the event
        const double h = t[j + 1] - t[j];
        const double m0 = h * traj.dfdt_hz_per_s[j];
        const double m1 = h * traj.dfdt_hz_per_s[j + 1];
        std::array<double, 2> roots{};
        const int n = stationary_points(f[j], f[j + 1], m0, m1, roots);
        std::sort(roots.begin(), roots.begin() + n);
        for (int r = 0; r < n; ++r) {
            const double v = hermite(f[j], f[j + 1], m0, m1, roots[r]);
            if (v < best.frequency_hz) best = {v, t[j] + roots[r] * h};
        }
    }
    return best;
}

double rocof(const Trajectory& traj, double window_s) {
    require_nonempty(traj);
    const auto& t = traj.times_s;
    const auto& f = traj.frequency_hz;
    const double step = traj.size() > 1 ? t[1] - t[0] : 0.0;
    if (traj.size() < 3 || !(window_s >= 2.0 * step * (1.0 - 1e-9))) {
        throw DomainError("RoCoF window must cover at least two steps");
    }
    const double lo = traj.event_time_s;
    const double hi = traj.event_time_s + window_s;
    const double eps = 1e-9 * step;
    if (lo < t.front() - eps || hi > t.back() + eps) {
        throw DomainError("RoCoF window lies outside the trajectory");
    }
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k + 1 < traj.size(); ++k) {
        if (t[k - 1] < lo - eps) continue;
        if (t[k + 1] > hi + eps) break;
        worst = std::min(worst, (f[k + 1] - f[k - 1]) / (t[k + 1] - t[k - 1]));
    }
    if (!std::isfinite(worst)) throw DomainError("RoCoF window holds no centred stencil");
    return worst;
}

double steady_state_frequency(const Trajectory& traj, double tail_fraction) {
    require_nonempty(traj);
    const auto& f = traj.frequency_hz;
    const std::size_t k = tail_count(f.size(), tail_fraction);
    double sum = 0.0;
    for (std::size_t i = f.size() - k; i < f.size(); ++i) sum += f[i];
    return sum / static_cast<double>(k);
}

double overshoot(const Trajectory& traj, double tail_fraction) {
    const double f_ss = steady_state_frequency(traj, tail_fraction);
    const Nadir low = nadir(traj);
    double peak = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        if (traj.times_s[i] > low.time_s) peak = std::max(peak, traj.frequency_hz[i] - f_ss);
    }
    return peak;
}

std::optional<double> settling_time(const Trajectory& traj, double band_hz, double tail_fraction) {
    if (!(band_hz > 0.0)) throw DomainError("settling band must be > 0");
    const double f_ss = steady_state_frequency(traj, tail_fraction);
    const auto& f = traj.frequency_hz;
    std::size_t first_inside = f.size();
    for (std::size_t i = f.size(); i-- > 0;) {
        if (std::abs(f[i] - f_ss) > band_hz) break;
        first_inside = i;
    }
    if (first_inside == f.size()) return std::nullopt;
    return traj.times_s[first_inside];
}

FrequencyMetrics compute_metrics(const Trajectory& traj, const MetricsOptions& options) {
    FrequencyMetrics m;
    const Nadir low = nadir(traj);
    m.nadir_hz = low.frequency_hz;
    m.nadir_time_s = low.time_s;
    m.rocof_hz_per_s = rocof(traj, options.rocof_window_s);
    m.f_steady_state_hz = steady_state_frequency(traj, options.tail_fraction);
    m.overshoot_hz = overshoot(traj, options.tail_fraction);
    m.settling_time_s = settling_time(traj, options.settling_band_hz, options.tail_fraction);
    return m;
}

}  // namespace evfreq
