#include "evfreq_cli/run_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "evfreq/csv_io.hpp"
#include "evfreq/system_model.hpp"

namespace evfreq::cli {

using nlohmann::json;

namespace {

// Each section is read through a Reader that records the keys it consumed so
// leftover (misspelled) keys can be reported.
class Reader {
public:
    Reader(const json& doc, std::string section) : doc_(doc), section_(std::move(section)) {
        if (!doc_.is_null() && !doc_.is_object()) {
            throw ConfigError("section '" + section_ + "' must be an object");
        }
    }

    template <typename T>
    void get(const char* key, T& target) {
        seen_.insert(key);
        if (doc_.is_null() || !doc_.contains(key) || doc_.at(key).is_null()) return;
        try {
            target = doc_.at(key).get<T>();
        } catch (const json::exception&) {
            throw ConfigError("key '" + section_ + "." + key + "' has the wrong type");
        }
    }

    void finish() const {
        if (!doc_.is_object()) return;
        for (const auto& [k, v] : doc_.items()) {
            if (!seen_.count(k)) throw ConfigError("unknown key '" + section_ + "." + k + "'");
        }
    }

private:
    const json& doc_;
    std::string section_;
    std::set<std::string> seen_;
};

const json& section(const json& doc, const char* name) {
    static const json null_doc;
    return doc.contains(name) ? doc.at(name) : null_doc;
}

template <typename E, typename Parse>
std::vector<E> parse_names(const std::vector<std::string>& names, Parse parse) {
    std::vector<E> out;
    for (const auto& n : names) out.push_back(parse(n));
    return out;
}

template <typename E>
std::vector<std::string> names_of(const std::vector<E>& values) {
    std::vector<std::string> out;
    for (auto v : values) out.push_back(to_string(v));
    return out;
}

}  // namespace

std::vector<double> RunConfig::level_fractions() const {
    std::vector<double> out;
    out.reserve(levels_pct.size());
    for (double p : levels_pct) out.push_back(p / 100.0);
    return out;
}

RunConfig parse_run_config(const json& doc) {
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    RunConfig c;
    Scenario& s = c.scenario;
    try {
        {
            Reader r(section(doc, "grid"), "grid");
            r.get("f_nominal_hz", s.grid.f_nominal_hz);
            r.get("h_preset", c.h_preset);
            r.get("h_eff_s", s.grid.h_eff_s);
            r.get("damping_pu", s.grid.damping_pu);
            r.get("droop_pu", s.grid.droop_pu);
            r.get("t_governor_s", s.grid.t_governor_s);
            r.get("t_turbine_s", s.grid.t_turbine_s);
            r.get("t_ev_s", s.grid.t_ev_s);
            r.get("s_base_mw", s.grid.s_base_mw);
            r.finish();
        }
        {
            Reader r(section(doc, "fleet"), "fleet");
            std::string strategy = to_string(s.fleet.strategy);
            double shift_start = s.fleet.vehicle.shift_start.minutes();
            double shift_end = s.fleet.vehicle.shift_end.minutes();
            r.get("n_vehicles", s.fleet.n_vehicles);
            r.get("strategy", strategy);
            r.get("battery_kwh", s.fleet.vehicle.battery_kwh);
            r.get("charger_kw", s.fleet.vehicle.charger_kw);
            r.get("discharge_kw", s.fleet.vehicle.discharge_kw);
            r.get("soc_return", s.fleet.vehicle.soc_return);
            r.get("soc_reserve", s.fleet.vehicle.soc_reserve);
            r.get("shift_start_min", shift_start);
            r.get("shift_end_min", shift_end);
            r.get("charging_efficiency", s.fleet.vehicle.charging_efficiency);
            r.finish();
            s.fleet.strategy = parse_strategy(strategy);
            s.fleet.vehicle.shift_start = TimeOfDay::from_minutes(shift_start);
            s.fleet.vehicle.shift_end = TimeOfDay::from_minutes(shift_end);
        }
        {
            Reader r(section(doc, "controller"), "controller");
            std::string mode = to_string(s.controller.mode);
            r.get("threshold_hz", s.controller.threshold_hz);
            r.get("participation_pct", c.participation_pct);
            r.get("mode", mode);
            r.get("latch", s.controller.latch);
            r.get("v2g_includes_shed", s.controller.v2g_includes_shed);
            r.finish();
            s.controller.mode = parse_mode(mode);
        }
        {
            Reader r(section(doc, "scenario"), "scenario");
            double clock = s.clock.minutes();
            r.get("disturbance_mw", s.disturbance_mw);
            r.get("event_time_s", s.event_time_s);
            r.get("clock_min", clock);
            r.get("horizon_s", s.horizon_s);
            r.get("step_s", s.step_s);
            r.get("pre_event_padding_s", s.pre_event_padding_s);
            r.finish();
            s.clock = TimeOfDay::from_minutes(clock);
        }
        {
            Reader r(section(doc, "metrics"), "metrics");
            r.get("rocof_window_s", c.metrics.rocof_window_s);
            r.get("settling_band_hz", c.metrics.settling_band_hz);
            r.get("tail_fraction", c.metrics.tail_fraction);
            r.finish();
        }
        {
            Reader r(section(doc, "sweep"), "sweep");
            std::vector<std::string> modes = names_of(c.modes);
            std::vector<std::string> strategies = names_of(c.strategies);
            r.get("levels_pct", c.levels_pct);
            r.get("modes", modes);
            r.get("strategies", strategies);
            r.finish();
            c.modes = parse_names<ControlMode>(modes, parse_mode);
            c.strategies = parse_names<ChargingStrategy>(strategies, parse_strategy);
        }
        {
            Reader r(section(doc, "daily"), "daily");
            std::string path;
            r.get("day_profile_csv", path);
            r.finish();
            if (!path.empty()) c.day_profile_csv = path;
        }
        {
            Reader r(section(doc, "profile"), "profile");
            r.get("step_min", c.profile_step_min);
            r.finish();
        }
        if (doc.contains("mix_csv") && !doc.at("mix_csv").is_null()) {
            if (!doc.at("mix_csv").is_string()) throw ConfigError("mix_csv must be a string");
            c.mix_csv = doc.at("mix_csv").get<std::string>();
        }
        static const std::set<std::string> top = {"grid",    "fleet", "controller", "scenario",
                                                  "metrics", "sweep", "daily",      "profile",
                                                  "mix_csv"};
        for (const auto& [k, v] : doc.items()) {
            if (!top.count(k)) throw ConfigError("unknown key '" + k + "'");
        }
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    return c;
}

void resolve(RunConfig& c) {
    Scenario& s = c.scenario;
    s.mix.reset();
    s.h_eff_override_s.reset();
    if (c.mix_csv) {
        try {
            s.mix = load_mix_csv(*c.mix_csv);
        } catch (const InputError& e) {
            throw ConfigError("mix file '" + *c.mix_csv + "': " + e.what());
        }
    }
    if (c.h_preset == "auto") c.h_preset = c.mix_csv ? "mix" : "table2_reported";

    if (c.h_preset == "mix") {
        if (!s.mix) throw ConfigError("h_preset 'mix' needs a mix file (--mix)");
    } else if (c.h_preset == "custom") {
        s.h_eff_override_s = s.grid.h_eff_s;
    } else {
        try {
            s.h_eff_override_s = inertia_preset_value(parse_inertia_preset(c.h_preset));
        } catch (const DomainError&) {
            throw ConfigError("unknown h_preset '" + c.h_preset +
                              "' (valid: table2_reported, table2_weighted, mix, custom)");
        }
    }
    const GridParameters g = s.effective_grid();
    s.grid.h_eff_s = g.h_eff_s;
    s.grid.s_base_mw = g.s_base_mw;

    s.controller.participation = c.participation_pct / 100.0;
    for (double p : c.levels_pct) {
        if (!(p >= 0.0 && p <= 100.0)) {
            throw ConfigError("participation level " + std::to_string(p) + "% outside [0, 100]");
        }
    }
    if (c.modes.empty()) throw ConfigError("at least one control mode is required");
    if (c.levels_pct.empty()) throw ConfigError("at least one participation level is required");
}

json to_json(const RunConfig& c) {
    const Scenario& s = c.scenario;
    json doc;
    doc["grid"] = {
        {"f_nominal_hz", s.grid.f_nominal_hz}, {"h_preset", c.h_preset},
        {"h_eff_s", s.grid.h_eff_s},           {"damping_pu", s.grid.damping_pu},
        {"droop_pu", s.grid.droop_pu},         {"t_governor_s", s.grid.t_governor_s},
        {"t_turbine_s", s.grid.t_turbine_s},   {"t_ev_s", s.grid.t_ev_s},
        {"s_base_mw", s.grid.s_base_mw},
    };
    doc["mix_csv"] = c.mix_csv ? json(*c.mix_csv) : json(nullptr);
    const VehicleClass& v = s.fleet.vehicle;
    doc["fleet"] = {
        {"n_vehicles", s.fleet.n_vehicles},
        {"strategy", to_string(s.fleet.strategy)},
        {"battery_kwh", v.battery_kwh},
        {"charger_kw", v.charger_kw},
        {"discharge_kw", v.discharge_kw},
        {"soc_return", v.soc_return},
        {"soc_reserve", v.soc_reserve},
        {"shift_start_min", v.shift_start.minutes()},
        {"shift_end_min", v.shift_end.minutes()},
        {"charging_efficiency", v.charging_efficiency},
    };
    doc["controller"] = {
        {"threshold_hz", s.controller.threshold_hz},
        {"participation_pct", c.participation_pct},
        {"mode", to_string(s.controller.mode)},
        {"latch", s.controller.latch},
        {"v2g_includes_shed", s.controller.v2g_includes_shed},
    };
    doc["scenario"] = {
        {"disturbance_mw", s.disturbance_mw}, {"event_time_s", s.event_time_s},
        {"clock_min", s.clock.minutes()},     {"horizon_s", s.horizon_s},
        {"step_s", s.step_s},                 {"pre_event_padding_s", s.pre_event_padding_s},
    };
    doc["metrics"] = {
        {"rocof_window_s", c.metrics.rocof_window_s},
        {"settling_band_hz", c.metrics.settling_band_hz},
        {"tail_fraction", c.metrics.tail_fraction},
    };
    json strategies = json::array();
    for (const auto& n : names_of(c.strategies)) strategies.push_back(n);
    doc["sweep"] = {
        {"levels_pct", c.levels_pct},
        {"modes", names_of(c.modes)},
        {"strategies", strategies},
    };
    doc["daily"] = {{"day_profile_csv", c.day_profile_csv ? json(*c.day_profile_csv) : json("")}};
    doc["profile"] = {{"step_min", c.profile_step_min}};
    return doc;
}

json load_config_document(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        try {
            return json::parse(text);
        } catch (const json::parse_error& e) {
            throw ConfigError("config '" + path.string() + "': " + e.what());
        }
    }
    // Provenance header of a previous output.
    json flat = json::object();
    std::istringstream lines(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(lines, line)) {
        ++line_no;
        if (line.rfind("# /", 0) != 0) {
            if (line.empty() || line[0] == '#') continue;
            break;
        }
        const auto eq = line.find(" = ");
        if (eq == std::string::npos) {
            throw ConfigError("config '" + path.string() + "' line " + std::to_string(line_no) +
                              ": expected '# /key = value'");
        }
        try {
            flat[line.substr(2, eq - 2)] = json::parse(line.substr(eq + 3));
        } catch (const json::parse_error&) {
            throw ConfigError("config '" + path.string() + "' line " + std::to_string(line_no) +
                              ": bad value");
        }
    }
    if (flat.empty()) throw ConfigError("config '" + path.string() + "' has no settings");
    json doc = flat.unflatten();
    // Empty lists flatten to null.
    if (doc.contains("sweep") && doc["sweep"].contains("strategies") &&
        doc["sweep"]["strategies"].is_null()) {
        doc["sweep"]["strategies"] = json::array();
    }
    return doc;
}

std::string provenance_header(const std::string& command, const RunConfig& config) {
    std::ostringstream out;
    out << "# evfreq " << command << '\n';
    const json flat = to_json(config).flatten();
    for (const auto& [key, value] : flat.items()) {
        out << "# " << key << " = " << value.dump() << '\n';
    }
    return out.str();
}

}  // namespace evfreq::cli
