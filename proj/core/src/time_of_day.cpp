#include "evfreq/time_of_day.hpp"

#include <cmath>
#include <cstdio>

#include "evfreq/errors.hpp"

namespace evfreq {

TimeOfDay TimeOfDay::from_minutes(double minutes) {
    if (!std::isfinite(minutes)) {
        throw DomainError("time of day must be finite");
    }
    double wrapped = std::fmod(minutes, kMinutesPerDay);
    if (wrapped < 0.0) wrapped += kMinutesPerDay;
    // fmod of a value just below a multiple of 1440 can round up to 1440.
    if (wrapped >= kMinutesPerDay) wrapped = 0.0;
    return TimeOfDay(wrapped);
}

double TimeOfDay::minutes_until(TimeOfDay later) const {
    double d = later.minutes_ - minutes_;
    if (d < 0.0) d += kMinutesPerDay;
    return d;
}

std::string TimeOfDay::to_string() const {
    const int total = static_cast<int>(std::floor(minutes_));
    char buf[16];
    std::snprintf(buf, sizeof buf, "%02d:%02d", total / 60, total % 60);
    return buf;
}

bool DailyInterval::contains(TimeOfDay t) const {
    if (duration_min <= 0.0) return false;
    if (duration_min >= kMinutesPerDay) return true;
    return start.minutes_until(t) < duration_min;
}

}  // namespace evfreq
