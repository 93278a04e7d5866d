#include "evfreq/csv_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include "evfreq/errors.hpp"

namespace evfreq {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t comma = line.find(',', pos);
        out.push_back(trim(line.substr(pos, comma - pos)));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

double parse_number(std::string_view field, std::size_t row, const char* column) {
    double v = 0.0;
    const auto* end = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(field.data(), end, v);
    if (field.empty() || ec != std::errc{} || ptr != end || !std::isfinite(v)) {
        throw InputError("row " + std::to_string(row) + ": invalid number '" + std::string(field) +
                             "' in column " + column,
                         row);
    }
    return v;
}

struct LineReader {
    std::istream& in;
    std::size_t line_no = 0;

    bool next(std::string& line) {
        while (std::getline(in, line)) {
            ++line_no;
            const auto t = trim(line);
            if (t.empty()) continue;
            line.assign(t);
            return true;
        }
        return false;
    }

    void expect_header(std::string_view header) {
        std::string line;
        while (next(line)) {
            if (line.front() == '#') continue;
            if (line != header) {
                throw InputError("line " + std::to_string(line_no) + ": expected header '" +
                                     std::string(header) + "', got '" + line + "'",
                                 line_no);
            }
            return;
        }
        throw InputError("missing header '" + std::string(header) + "'");
    }
};

std::ifstream open(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path.string() + "'");
    return in;
}

}  // namespace

GenerationMix read_mix_csv(std::istream& in) {
    LineReader reader{in};
    reader.expect_header(kMixHeader);
    std::vector<GenerationSource> sources;
    std::string line;
    while (reader.next(line)) {
        const auto row = reader.line_no;
        const auto f = split(line);
        if (f.size() != 3) {
            throw InputError("row " + std::to_string(row) + ": expected 3 fields", row);
        }
        GenerationSource s{std::string(f[0]), parse_number(f[1], row, "h_seconds"),
                           parse_number(f[2], row, "power_mw")};
        if (s.inertia_s < 0.0 || s.power_mw < 0.0) {
            throw InputError("row " + std::to_string(row) + ": negative value", row);
        }
        sources.push_back(std::move(s));
    }
    try {
        return GenerationMix(std::move(sources));
    } catch (const DomainError& e) {
        throw InputError(e.what());
    }
}

GenerationMix load_mix_csv(const std::filesystem::path& path) {
    auto in = open(path);
    return read_mix_csv(in);
}

DayProfile read_day_profile_csv(std::istream& in) {
    LineReader reader{in};
    reader.expect_header(kDayProfileHeader);
    std::vector<std::optional<DayProfileRow>> slots(DayProfile::kIntervals);
    std::vector<std::size_t> slot_row(DayProfile::kIntervals, 0);
    std::size_t count = 0;
    std::string line;
    while (reader.next(line)) {
        const auto row = reader.line_no;
        const auto f = split(line);
        if (f.size() != 1 + DayProfileColumns::kCount) {
            throw InputError("row " + std::to_string(row) + ": expected 8 fields", row);
        }
        const double clock = parse_number(f[0], row, "clock_min");
        const double slot = clock / DayProfile::kIntervalMin;
        if (clock < 0.0 || clock >= kMinutesPerDay || slot != std::floor(slot)) {
            throw InputError("row " + std::to_string(row) + ": clock_min " + std::string(f[0]) +
                                 " is not a 15-minute mark in [0, 1440)",
                             row);
        }
        const auto idx = static_cast<std::size_t>(slot);
        if (slots[idx]) {
            throw InputError("row " + std::to_string(row) + ": duplicate clock_min " +
                                 std::string(f[0]) + " (first seen on row " +
                                 std::to_string(slot_row[idx]) + ")",
                             row);
        }
        std::vector<double> cols;
        for (std::size_t c = 0; c < DayProfileColumns::kCount; ++c) {
            cols.push_back(parse_number(f[c + 1], row, DayProfileColumns::kNames[c]));
        }
        try {
            slots[idx] = DayProfileRow{TimeOfDay::from_minutes(clock), day_profile_mix(cols)};
        } catch (const DomainError& e) {
            throw InputError("row " + std::to_string(row) + ": " + e.what(), row);
        }
        slot_row[idx] = row;
        ++count;
    }
    if (count != DayProfile::kIntervals) {
        throw InputError("day profile must have exactly 96 rows, got " + std::to_string(count));
    }
    std::vector<DayProfileRow> rows;
    rows.reserve(count);
    for (auto& s : slots) rows.push_back(std::move(*s));
    return DayProfile(std::move(rows));
}

DayProfile load_day_profile_csv(const std::filesystem::path& path) {
    auto in = open(path);
    return read_day_profile_csv(in);
}

void write_day_profile_csv(std::ostream& out, const DayProfile& day) {
    out << kDayProfileHeader << '\n';
    for (const auto& r : day.rows()) {
        out << format_fixed(r.clock.minutes(), 0);
        for (const auto& s : r.mix.sources()) out << ',' << format_fixed(s.power_mw, 1);
        out << '\n';
    }
}

std::string format_fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
    std::string s(buf);
    if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
    return s;
}

void write_trajectory_rows(std::ostream& out, const Trajectory& traj) {
    out << kTrajectoryHeader << '\n';
    for (std::size_t i = 0; i < traj.size(); ++i) {
        out << format_fixed(traj.times_s[i]) << ',' << format_fixed(traj.frequency_hz[i]) << ','
            << format_fixed(traj.p_mech_pu[i]) << ',' << format_fixed(traj.p_ev_pu[i]) << ','
            << format_fixed(traj.mean_soc[i]) << '\n';
    }
}

void write_profile_rows(std::ostream& out, std::span<const ProfileSample> profile) {
    out << kProfileHeader << '\n';
    for (const auto& p : profile) {
        out << format_fixed(p.clock.minutes(), 0) << ',' << format_fixed(p.per_vehicle_kw) << ','
            << format_fixed(p.aggregate_mw) << ',' << format_fixed(p.mean_soc) << '\n';
    }
}

void write_metrics_row(std::ostream& out, const MetricsRecord& r) {
    const auto& m = r.metrics;
    out << r.scenario_id << ',' << to_string(r.mode) << ',' << format_fixed(r.participation) << ','
        << to_string(r.strategy) << ',' << format_fixed(r.clock.minutes(), 0) << ','
        << format_fixed(m.nadir_hz) << ',' << format_fixed(m.nadir_time_s) << ','
        << format_fixed(m.rocof_hz_per_s) << ',' << format_fixed(m.overshoot_hz) << ','
        << (m.settling_time_s ? format_fixed(*m.settling_time_s) : std::string()) << ','
        << format_fixed(m.f_steady_state_hz) << '\n';
}

}  // namespace evfreq
