#include "evfreq_cli/commands.hpp"

#include <unistd.h>

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "evfreq/csv_io.hpp"
#include "evfreq/errors.hpp"
#include "evfreq/simulator.hpp"
#include "evfreq_cli/run_config.hpp"

namespace evfreq::cli {

namespace {

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        const auto b = item.find_first_not_of(' ');
        const auto e = item.find_last_not_of(' ');
        if (b == std::string::npos) throw ConfigError("empty item in list '" + text + "'");
        out.push_back(item.substr(b, e - b + 1));
    }
    if (out.empty()) throw ConfigError("empty list");
    return out;
}

double parse_double(const std::string& text, const char* what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(std::string("invalid ") + what + " '" + text + "'");
    }
}

struct Overrides {
    std::string config_path;
    std::string out_path;
    std::string levels;
    std::string modes;
    std::string strategy;
    std::string mix;
    std::string h_preset;
    std::string day;
    std::string mode;
    double step = 0.0;
    double horizon = 0.0;
    double participation = -1.0;
    double profile_step = 0.0;
    unsigned jobs = 1;
};

RunConfig build_config(const Overrides& o, bool strategy_is_list) {
    RunConfig c = o.config_path.empty() ? RunConfig{}
                                        : parse_run_config(load_config_document(o.config_path));
    try {
        if (!o.levels.empty()) {
            c.levels_pct.clear();
            for (const auto& l : split_list(o.levels)) c.levels_pct.push_back(parse_double(l, "level"));
        }
        if (!o.modes.empty()) {
            c.modes.clear();
            for (const auto& m : split_list(o.modes)) c.modes.push_back(parse_mode(m));
        }
        if (!o.mode.empty()) c.scenario.controller.mode = parse_mode(o.mode);
        if (!o.strategy.empty()) {
            if (strategy_is_list) {
                c.strategies.clear();
                if (o.strategy == "all") {
                    c.strategies.assign(std::begin(kAllStrategies), std::end(kAllStrategies));
                } else {
                    for (const auto& s : split_list(o.strategy)) c.strategies.push_back(parse_strategy(s));
                }
                if (c.strategies.size() == 1) {
                    c.scenario.fleet.strategy = c.strategies.front();
                    c.strategies.clear();
                }
            } else {
                c.scenario.fleet.strategy = parse_strategy(o.strategy);
            }
        }
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    if (!o.mix.empty()) c.mix_csv = o.mix;
    if (!o.h_preset.empty()) c.h_preset = o.h_preset;
    if (!o.day.empty()) c.day_profile_csv = o.day;
    if (o.step > 0.0) c.scenario.step_s = o.step;
    if (o.horizon > 0.0) c.scenario.horizon_s = o.horizon;
    if (o.participation >= 0.0) c.participation_pct = o.participation;
    if (o.profile_step > 0.0) c.profile_step_min = o.profile_step;
    resolve(c);
    try {
        c.scenario.validate();
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    return c;
}

// Writes to a sibling temp file and renames it into place, so a failed run
// never leaves a partial file at `path`.
void emit(const std::string& path, const std::string& content, std::ostream& out) {
    if (path.empty()) {
        out << content;
        out.flush();
        return;
    }
    const std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw InputError("cannot write '" + tmp.string() + "'");
        f << content;
        f.close();
        if (!f) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw InputError("write to '" + tmp.string() + "' failed");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw InputError("cannot move output into '" + path + "'");
    }
}

std::string cmd_simulate(const RunConfig& c) {
    std::ostringstream out;
    out << provenance_header("simulate", c);
    write_trajectory_rows(out, simulate(c.scenario));
    return out.str();
}

std::string cmd_sweep(const RunConfig& c, unsigned jobs) {
    const auto levels = c.level_fractions();
    const auto rows = participation_sweep(c.scenario, levels, c.modes, c.metrics, c.strategies,
                                          ParallelOptions{jobs});
    std::ostringstream out;
    out << provenance_header("sweep", c) << kMetricsHeader << '\n';
    for (std::size_t i = 0; i < rows.size(); ++i) {
        write_metrics_row(out, {i, rows[i].mode, rows[i].participation, rows[i].strategy,
                                c.scenario.clock, rows[i].metrics});
    }
    return out.str();
}

std::string cmd_daily(const RunConfig& c, unsigned jobs) {
    const DayProfile day =
        c.day_profile_csv ? load_day_profile_csv(*c.day_profile_csv) : synthetic_day_profile();
    const auto levels = c.level_fractions();
    const auto rows =
        daily_nadir_scan(day, c.scenario, levels, c.modes, c.metrics, c.strategies, ParallelOptions{jobs});
    std::ostringstream out;
    out << provenance_header("daily", c) << kMetricsHeader << '\n';
    for (std::size_t i = 0; i < rows.size(); ++i) {
        write_metrics_row(out, {i, rows[i].mode, rows[i].participation, rows[i].strategy,
                                rows[i].clock, rows[i].metrics});
    }
    return out.str();
}

std::string cmd_profile(const RunConfig& c) {
    std::ostringstream out;
    out << provenance_header("profile", c);
    write_profile_rows(out, aggregate_profile(c.scenario.fleet, c.profile_step_min));
    return out.str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Primary frequency response of heavy-duty EV fleets"};
    app.require_subcommand(1);
    Overrides o;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config_path, "JSON config, or a CSV written by this tool")
            ->check(CLI::ExistingFile);
        sub->add_option("--out", o.out_path, "Output CSV (default: standard output)");
        sub->add_option("--strategy", o.strategy, "immediate | delayed | constant");
        sub->add_option("--mix", o.mix, "Generation mix CSV (source,h_seconds,power_mw)");
        sub->add_option("--step", o.step, "Integration step, seconds");
        sub->add_option("--horizon", o.horizon, "Simulated horizon, seconds");
        sub->add_option("--h-preset", o.h_preset,
                        "table2_reported | table2_weighted | mix | custom");
    };
    auto add_grid = [&](CLI::App* sub) {
        sub->add_option("--levels", o.levels, "Participation levels in percent, comma separated");
        sub->add_option("--modes", o.modes, "Control modes, comma separated (v1g,v2g)");
        sub->add_option("--jobs", o.jobs, "Worker threads (0 = all cores)");
    };

    auto* simulate_cmd = app.add_subcommand("simulate", "Single contingency trajectory");
    add_common(simulate_cmd);
    simulate_cmd->add_option("--participation", o.participation, "Participation, percent");
    simulate_cmd->add_option("--mode", o.mode, "v1g | v2g");

    auto* sweep_cmd = app.add_subcommand("sweep", "Metrics over participation levels and modes");
    add_common(sweep_cmd);
    add_grid(sweep_cmd);

    auto* daily_cmd = app.add_subcommand("daily", "Metrics at every 15-minute mark of a day");
    add_common(daily_cmd);
    add_grid(daily_cmd);
    daily_cmd->add_option("--day", o.day, "Day profile CSV (default: built-in synthetic day)");

    auto* profile_cmd = app.add_subcommand("profile", "24 h fleet charging profile");
    add_common(profile_cmd);
    profile_cmd->add_option("--profile-step", o.profile_step, "Profile step, minutes");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }

    try {
        const bool list = sweep_cmd->parsed() || daily_cmd->parsed();
        const RunConfig config = build_config(o, list);
        std::string content;
        if (simulate_cmd->parsed()) content = cmd_simulate(config);
        else if (sweep_cmd->parsed()) content = cmd_sweep(config, o.jobs);
        else if (daily_cmd->parsed()) content = cmd_daily(config, o.jobs);
        else content = cmd_profile(config);
        emit(o.out_path, content, out);
        return kExitOk;
    } catch (const InfeasibleError& e) {
        err << "error: infeasible charging window: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const IntegrationError& e) {
        err << "error: numerical divergence: " << e.what() << '\n';
        return kExitDivergence;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

}  // namespace evfreq::cli
