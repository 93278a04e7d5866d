#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "evfreq/csv_io.hpp"
#include "evfreq_cli/commands.hpp"

namespace fs = std::filesystem;
using evfreq::cli::run;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

// Non-comment lines; the header row comes first.
std::vector<std::string> body(const std::string& csv) {
    std::vector<std::string> rows;
    std::istringstream in(csv);
    for (std::string l; std::getline(in, l);) {
        if (!l.empty() && l.front() != '#') rows.push_back(l);
    }
    return rows;
}

std::vector<std::string> fields(const std::string& row) {
    std::vector<std::string> f;
    std::istringstream in(row);
    for (std::string x; std::getline(in, x, ',');) f.push_back(x);
    if (!row.empty() && row.back() == ',') f.emplace_back();
    return f;
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("evfreq_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path write(const std::string& name, const std::string& text) {
        const fs::path p = dir_ / name;
        std::ofstream(p) << text;
        return p;
    }
    bool only(const std::vector<std::string>& names) {
        std::size_t n = 0;
        for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir_)) ++n;
        for (const auto& s : names)
            if (!fs::exists(dir_ / s)) return false;
        return n == names.size();
    }

    fs::path dir_;
};

}  // namespace

TEST_F(Cli, SimulateDefaultsToStdout) {
    const Result r = invoke({"simulate"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = body(r.out);
    EXPECT_EQ(rows.front(), std::string(evfreq::kTrajectoryHeader));
    EXPECT_EQ(rows.size(), 6002u);
    EXPECT_EQ(r.out.rfind("# evfreq simulate\n", 0), 0u);
    EXPECT_NE(r.out.find("# /grid/h_eff_s = 6.4\n"), std::string::npos);
    const auto last = fields(rows.back());
    EXPECT_EQ(last[0], "60.000000");
    EXPECT_NEAR(std::stod(last[1]), 59.741, 1e-3);
}

TEST_F(Cli, SweepRowsAndColumns) {
    const Result r = invoke({"sweep", "--horizon", "30"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = body(r.out);
    ASSERT_EQ(rows.size(), 11u);
    EXPECT_EQ(rows.front(), std::string(evfreq::kMetricsHeader));
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto f = fields(rows[i]);
        ASSERT_EQ(f.size(), 11u);
        EXPECT_EQ(f[0], std::to_string(i - 1));
        EXPECT_EQ(f[1], i <= 5 ? "v1g" : "v2g");
        EXPECT_EQ(f[3], "immediate");
        EXPECT_EQ(f[4], "1200");
    }
}

TEST_F(Cli, SweepAllStrategies) {
    const Result r = invoke({"sweep", "--strategy", "all", "--levels", "50,100", "--horizon", "20"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = body(r.out);
    ASSERT_EQ(rows.size(), 13u);
    EXPECT_EQ(fields(rows[1])[3], "immediate");
    EXPECT_EQ(fields(rows[5])[3], "delayed");
    EXPECT_EQ(fields(rows[9])[3], "constant");
}

TEST_F(Cli, DailyHas96RowsPerCell) {
    const Result r = invoke({"daily", "--levels", "100", "--modes", "v2g", "--horizon", "15"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = body(r.out);
    ASSERT_EQ(rows.size(), 97u);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        EXPECT_EQ(fields(rows[i])[4], std::to_string(15 * (i - 1)));
    }
}

TEST_F(Cli, DailyReadsBundledProfile) {
    const std::string day = (fs::path(EVFREQ_DATA_DIR) / "day_profile_synthetic.csv").string();
    const Result a = invoke({"daily", "--levels", "0", "--modes", "v1g", "--horizon", "15", "--day", day});
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(body(a.out).size(), 97u);
}

TEST_F(Cli, ProfileShapes) {
    const Result imm = invoke({"profile"});
    ASSERT_EQ(imm.code, 0) << imm.err;
    const auto rows = body(imm.out);
    ASSERT_EQ(rows.size(), 97u);
    double peak = 0.0, energy_mwh = 0.0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto f = fields(rows[i]);
        peak = std::max(peak, std::stod(f[1]));
        energy_mwh += std::stod(f[2]) * 0.25;
    }
    EXPECT_EQ(peak, 100.0);
    EXPECT_NEAR(energy_mwh, 15000 * 0.7, 1e-6);

    const Result con = invoke({"profile", "--strategy", "constant", "--profile-step", "60"});
    ASSERT_EQ(con.code, 0) << con.err;
    const auto crows = body(con.out);
    ASSERT_EQ(crows.size(), 25u);
    EXPECT_EQ(fields(crows[17])[1], "50.000000");  // 16:00
    EXPECT_EQ(fields(crows[7])[1], "0.000000");    // 06:00, on shift
}

TEST_F(Cli, ExitCodes) {
    EXPECT_EQ(invoke({}).code, 2);
    EXPECT_EQ(invoke({"bogus"}).code, 2);
    EXPECT_EQ(invoke({"simulate", "--step", "0.007"}).code, 2);
    EXPECT_EQ(invoke({"simulate", "--participation", "150"}).code, 2);
    EXPECT_EQ(invoke({"sweep", "--levels", "20,abc"}).code, 2);
    EXPECT_EQ(invoke({"simulate", "--mix", (dir_ / "missing.csv").string()}).code, 2);

    const Result strat = invoke({"simulate", "--strategy", "sometimes"});
    EXPECT_EQ(strat.code, 2);
    for (const char* name : {"immediate", "delayed", "constant"}) {
        EXPECT_NE(strat.err.find(name), std::string::npos) << strat.err;
    }

    const auto unknown = write("unknown.json", R"({"grid": {"inertia": 4}})");
    const Result u = invoke({"simulate", "--config", unknown.string()});
    EXPECT_EQ(u.code, 2);
    EXPECT_NE(u.err.find("inertia"), std::string::npos);

    const auto infeasible = write("big.json", R"({"fleet": {"battery_kwh": 3000}})");
    const Result inf = invoke({"simulate", "--config", infeasible.string()});
    EXPECT_EQ(inf.code, 3);
    EXPECT_NE(inf.err.find("deficit"), std::string::npos);

    const auto stiff = write("stiff.json", R"({"grid": {"t_governor_s": 0.001}, "scenario": {"step_s": 0.5}})");
    EXPECT_EQ(invoke({"simulate", "--config", stiff.string()}).code, 4);
}

TEST_F(Cli, FailedRunLeavesNoOutput) {
    const auto infeasible = write("big.json", R"({"fleet": {"battery_kwh": 3000}})");
    const fs::path out = dir_ / "out.csv";
    EXPECT_EQ(invoke({"sweep", "--config", infeasible.string(), "--out", out.string()}).code, 3);
    EXPECT_TRUE(only({"big.json"}));

    // An existing file survives a failed rerun untouched.
    ASSERT_EQ(invoke({"profile", "--out", out.string()}).code, 0);
    const std::string before = slurp(out);
    EXPECT_EQ(invoke({"profile", "--config", infeasible.string(), "--out", out.string()}).code, 3);
    EXPECT_EQ(slurp(out), before);
    EXPECT_TRUE(only({"big.json", "out.csv"}));
}

TEST_F(Cli, ByteIdenticalReruns) {
    const fs::path a = dir_ / "a.csv", b = dir_ / "b.csv", c = dir_ / "c.csv";
    const std::vector<std::string> base{"sweep", "--strategy", "all", "--horizon", "20"};
    auto with = [&](std::vector<std::string> extra) {
        auto v = base;
        v.insert(v.end(), extra.begin(), extra.end());
        return v;
    };
    ASSERT_EQ(invoke(with({"--out", a.string(), "--jobs", "1"})).code, 0);
    ASSERT_EQ(invoke(with({"--out", b.string(), "--jobs", "1"})).code, 0);
    ASSERT_EQ(invoke(with({"--out", c.string(), "--jobs", "4"})).code, 0);
    EXPECT_EQ(slurp(a), slurp(b));
    EXPECT_EQ(slurp(a), slurp(c));
}

TEST_F(Cli, OutputHeaderReplaysAsConfig) {
    const fs::path first = dir_ / "first.csv", second = dir_ / "second.csv";
    const auto cfg = write("cfg.json", R"({"grid": {"h_preset": "table2_weighted", "t_turbine_s": 2.0},
        "fleet": {"strategy": "constant"}, "scenario": {"horizon_s": 20, "disturbance_mw": 1200}})");
    ASSERT_EQ(invoke({"sweep", "--config", cfg.string(), "--levels", "40,80", "--out", first.string()}).code, 0);
    ASSERT_EQ(invoke({"sweep", "--config", first.string(), "--out", second.string()}).code, 0);
    EXPECT_EQ(slurp(first), slurp(second));
    EXPECT_NE(slurp(first).find("# /grid/h_preset = \"table2_weighted\""), std::string::npos);
}

TEST_F(Cli, ReferenceConfigLoads) {
    const std::string ref = (fs::path(EVFREQ_DATA_DIR) / "reference_config.json").string();
    const Result r = invoke({"simulate", "--config", ref, "--horizon", "5"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("# /grid/t_turbine_s = 2.0"), std::string::npos);
}

TEST_F(Cli, HelpExitsZero) {
    const Result r = invoke({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("simulate"), std::string::npos);
}
