#pragma once

#include <compare>
#include <string>

namespace evfreq {

inline constexpr double kMinutesPerDay = 1440.0;

/// A wall-clock instant within one day, stored as minutes after midnight in
/// [0, 1440). Arithmetic wraps at midnight.
class TimeOfDay {
public:
    constexpr TimeOfDay() = default;

    /// Wraps any finite minute count into [0, 1440).
    static TimeOfDay from_minutes(double minutes);
    static TimeOfDay from_hm(int hours, int minutes = 0) {
        return from_minutes(60.0 * hours + minutes);
    }

    constexpr double minutes() const noexcept { return minutes_; }
    constexpr double hours() const noexcept { return minutes_ / 60.0; }

    TimeOfDay plus_minutes(double delta) const { return from_minutes(minutes_ + delta); }

    /// Minutes to walk forward from `*this` to reach `later`, in [0, 1440).
    double minutes_until(TimeOfDay later) const;

    /// "HH:MM" (seconds truncated).
    std::string to_string() const;

    constexpr auto operator<=>(const TimeOfDay&) const = default;

private:
    constexpr explicit TimeOfDay(double m) : minutes_(m) {}
    double minutes_ = 0.0;
};

/// Half-open interval [start, start + duration) on the 24 h circle.
struct DailyInterval {
    TimeOfDay start;
    double duration_min = 0.0;

    TimeOfDay end() const { return start.plus_minutes(duration_min); }
    bool contains(TimeOfDay t) const;
    /// Minutes elapsed since `start`, valid when `contains(t)`.
    double elapsed(TimeOfDay t) const { return start.minutes_until(t); }
};

}  // namespace evfreq
