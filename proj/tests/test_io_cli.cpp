#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "lpq/cli.hpp"
#include "lpq/io.hpp"

using namespace lpq;
namespace fs = std::filesystem;

namespace {

std::vector<std::string> lines_of(const std::string &text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

std::vector<std::string> split(const std::string &line) {
    std::vector<std::string> out;
    std::stringstream in(line);
    for (std::string cell; std::getline(in, cell, ',');) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

struct Run {
    int code = -1;
    std::string out;
};

// Runs the lpq binary through the shell and captures stdout.
Run run_cli(const std::string &args) {
    Run r;
    const std::string cmd = std::string(LPQ_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE *pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    for (std::size_t n; (n = fread(buf, 1, sizeof buf, pipe)) > 0;) r.out.append(buf, n);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

fs::path scratch_dir(const std::string &name) {
    const auto dir = fs::temp_directory_path() / ("lpq_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

cli::RunConfig base_config() {
    cli::RunConfig cfg;
    cfg.n = 16;
    cfg.m = 3;
    cfg.p = 4;
    cfg.s = 1;
    return cfg;
}

}  // namespace

TEST(Format, SeventeenDigitsRoundTrip) {
    Rng rng(1);
    for (int i = 0; i < 10000; ++i) {
        const double v = rng.uniform() * std::pow(10.0, static_cast<int>(rng.below(40)) - 20);
        ASSERT_EQ(std::stod(io::format_double(v)), v);
    }
}

TEST(JsonWriter, NestedStructure) {
    std::ostringstream os;
    io::JsonWriter w(os);
    w.begin_object().field("a", 1).key("b").begin_array().value(0.5).null().value("x\"y").end_array();
    w.field("c", std::optional<int>{}).end_object();
    const auto j = nlohmann::json::parse(os.str());
    EXPECT_EQ(j["a"], 1);
    EXPECT_EQ(j["b"][0], 0.5);
    EXPECT_TRUE(j["b"][1].is_null());
    EXPECT_EQ(j["b"][2], "x\"y");
    EXPECT_TRUE(j["c"].is_null());
}

TEST(SpecJson, RoundTripAndValidation) {
    const auto spec = build_oracle(32, 4, 5, 2);
    EXPECT_EQ(io::parse_spec(io::spec_to_json(spec)), spec);
    try {
        (void)io::parse_spec(R"({"n":16,"m":3,"p":5,"s":0})");
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::PeriodTooLarge);
    }
    EXPECT_NO_THROW((void)io::parse_spec(R"({"n":16,"m":3,"p":5,"s":0})", false));
    try {
        (void)io::parse_spec(R"({"n":16,"m":3,"p":4})");
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::InvalidArgument);
    }
}

TEST(TableJson, ProbabilitiesRoundTripExactly) {
    const auto spec = build_oracle(97, 5, 9, 3);
    for (Algorithm alg : {Algorithm::Amplified, Algorithm::Qft, Algorithm::Qhs}) {
        const auto table = simulated_table(alg, spec);
        std::ostringstream os;
        io::write_table_json(os, table);
        const auto back = io::read_table_json(nlohmann::json::parse(os.str()));
        ASSERT_EQ(back.entries.size(), table.entries.size());
        for (std::size_t i = 0; i < table.entries.size(); ++i) {
            EXPECT_LE(std::abs(back.entries[i].pr - table.entries[i].pr), 1e-15);
            EXPECT_EQ(back.entries[i].spectrum_case, table.entries[i].spectrum_case);
            EXPECT_EQ(back.entries[i].source, Source::Simulated);
        }
    }
}

TEST(TableCsv, SchemaHeader) {
    std::ostringstream os;
    io::write_table_csv(os, closed_form_table(Algorithm::Qft, build_oracle(16, 3, 4, 1)));
    const auto lines = lines_of(os.str());
    ASSERT_EQ(lines.size(), 18u);
    EXPECT_EQ(lines[0], "# schema=1");
    EXPECT_EQ(lines[1], "y,pr,case,source");
    EXPECT_EQ(lines[2], "0,0.390625,zero,closed-form");
}

TEST(CmdSpectrum, AmplifiedTable) {
    std::ostringstream out;
    ASSERT_EQ(cli::cmd_spectrum(base_config(), out), cli::kOk);
    const auto lines = lines_of(out.str());
    ASSERT_EQ(lines.size(), 3u + 16u);
    EXPECT_EQ(lines[0], "# schema=1");
    EXPECT_EQ(lines[2], "y,case,pr_closed_form,pr_simulated,abs_deviation");
    double max_dev = 0.0;
    for (std::size_t i = 3; i < lines.size(); ++i) max_dev = std::max(max_dev, std::stod(split(lines[i])[4]));
    EXPECT_LT(max_dev, 1e-9);
}

TEST(CmdSpectrum, QftZeroRowAndJson) {
    auto cfg = base_config();
    cfg.algorithm = Algorithm::Qft;
    std::ostringstream out;
    ASSERT_EQ(cli::cmd_spectrum(cfg, out), cli::kOk);
    EXPECT_EQ(split(lines_of(out.str())[3])[2], "0.390625");

    cfg.format = cli::Format::Json;
    std::ostringstream js;
    ASSERT_EQ(cli::cmd_spectrum(cfg, js), cli::kOk);
    const auto j = nlohmann::json::parse(js.str());
    EXPECT_EQ(j["rows"].size(), 16u);
    EXPECT_EQ(j["rows"][0]["pr_closed_form"].get<double>(), 0.390625);
    EXPECT_LT(j["max_abs_deviation"].get<double>(), 1e-9);
}

TEST(CmdCompare, VerdictsAndGaps) {
    auto cfg = base_config();
    cfg.format = cli::Format::Json;
    std::ostringstream out;
    ASSERT_EQ(cli::cmd_compare(cfg, out), cli::kOk);
    const auto j = nlohmann::json::parse(out.str());
    EXPECT_EQ(j["bounds_qft"]["gap"].get<double>(), 1.0);
    EXPECT_EQ(j["bounds_qhs"]["gap"].get<double>(), 2.0);
    EXPECT_EQ(j["per_y_verdict"], "pass");
    EXPECT_EQ(j["success_set"]["verdict_qft"], "pass");
    EXPECT_EQ(j["rows"][0]["verdict_qft"], "excluded");

    // Null rows are excluded too.
    auto relaxed = base_config();
    relaxed.m = 4;
    relaxed.p = 4;
    relaxed.s = 0;
    std::ostringstream csv;
    ASSERT_EQ(cli::cmd_compare(relaxed, csv), cli::kOk);
    int null_rows = 0;
    for (const auto &line : lines_of(csv.str())) {
        const auto cells = split(line);
        if (cells.size() > 1 && cells[1] == "null") {
            ++null_rows;
            EXPECT_EQ(cells[7], "excluded");
        }
    }
    EXPECT_GT(null_rows, 0);
}

TEST(CmdRecover, ExitCodes) {
    auto cfg = base_config();
    std::ostringstream sink;
    cfg.y = 4;
    EXPECT_EQ(cli::cmd_recover(cfg, sink), cli::kOk);
    cfg.y = 0;
    EXPECT_EQ(cli::cmd_recover(cfg, sink), cli::kNoCandidate);
    cfg.y = 5;
    EXPECT_EQ(cli::cmd_recover(cfg, sink), cli::kOk);
    cfg.verify = true;
    std::ostringstream out;
    EXPECT_EQ(cli::cmd_recover(cfg, out), cli::kVerificationFailed);
    EXPECT_NE(out.str().find("verify q=3 rejected"), std::string::npos);
}

TEST(CmdFindOffset, TrueWrongAndSingle) {
    auto cfg = base_config();
    cfg.n = 1024;
    cfg.m = 8;
    cfg.p = 30;
    cfg.s = 77;
    for (auto method : {SearchMethod::Decreasing, SearchMethod::Counting}) {
        cfg.method = method;
        cfg.period.reset();
        cfg.counter_confidence = 1.0;
        std::ostringstream out;
        EXPECT_EQ(cli::cmd_find_offset(cfg, out), cli::kOk);
        EXPECT_NE(out.str().find("offset=77"), std::string::npos);
        cfg.period = 29;
        std::ostringstream wrong;
        EXPECT_EQ(cli::cmd_find_offset(cfg, wrong), cli::kVerificationFailed);
    }
    cfg.period.reset();
    cfg.m = 1;
    cfg.method = SearchMethod::Decreasing;
    cfg.format = cli::Format::Json;
    std::ostringstream single;
    EXPECT_EQ(cli::cmd_find_offset(cfg, single), cli::kOk);
    const auto j = nlohmann::json::parse(single.str());
    EXPECT_EQ(j["offset"], 77);
    EXPECT_EQ(j["iterations"], 0);
}

TEST(CmdTrials, ReportRows) {
    auto cfg = base_config();
    cfg.n = 1024;
    cfg.m = 4;
    cfg.p = 4;
    cfg.runs = 200;
    cfg.format = cli::Format::Json;
    std::ostringstream out;
    ASSERT_EQ(cli::cmd_trials(cfg, out), cli::kOk);
    const auto j = nlohmann::json::parse(out.str());
    const auto k = j["k"].get<double>();
    EXPECT_EQ(j["reports"][0]["total_cost"].get<double>(), k + 1);
    EXPECT_TRUE(j["reports"][1]["bound_holds"].get<bool>());
    EXPECT_GE(j["reports"][1]["expected_runs"].get<double>(), 1024.0 / 16.0);
    EXPECT_GE(j["reports"][2]["expected_runs"].get<double>(), 1024.0 / 8.0);
    EXPECT_EQ(j["reports"][1]["monte_carlo"]["runs"], 200);
}

TEST(CmdSweep, OneFilePerN) {
    const auto dir = scratch_dir("sweep");
    auto cfg = base_config();
    cfg.m = 4;
    cfg.p = 4;
    cfg.s = 3;
    cfg.log2_min = 8;
    cfg.log2_max = 11;
    cfg.out = dir.string();
    std::ostringstream out;
    ASSERT_EQ(cli::cmd_sweep(cfg, out), cli::kOk);
    for (int j = 8; j <= 11; ++j) EXPECT_TRUE(fs::exists(dir / ("sweep_N" + std::to_string(1 << j) + ".csv")));
    EXPECT_NE(out.str().find("verdict=pass"), std::string::npos);
}

TEST(Cli, ConfigFileWithFlagOverride) {
    const auto dir = scratch_dir("config");
    std::ofstream(dir / "run.json") << R"({"n": 16, "m": 3, "p": 4, "s": 1, "alg": "qft", "format": "csv"})";
    const auto r = run_cli("spectrum --config " + (dir / "run.json").string());
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("algorithm=qft"), std::string::npos);
    const auto o = run_cli("spectrum --config " + (dir / "run.json").string() + " --alg qhs --format json");
    ASSERT_EQ(o.code, 0);
    EXPECT_EQ(nlohmann::json::parse(o.out)["algorithm"], "qhs");
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run_cli("spectrum --n 16 --m 3 --p 4 --s 1").code, 0);
    EXPECT_EQ(run_cli("spectrum --n 16 --m 3 --p 5 --s 0").code, 2);
    EXPECT_EQ(run_cli("spectrum --n 16 --m 3 --p 5 --s 0 --no-strict").code, 0);
    EXPECT_EQ(run_cli("spectrum --bogus").code, 2);
    EXPECT_EQ(run_cli("spectrum --alg nope").code, 2);
    EXPECT_EQ(run_cli("").code, 2);
    EXPECT_EQ(run_cli("--help").code, 0);
    EXPECT_EQ(run_cli("recover --n 16 --y 0").code, 3);
    EXPECT_EQ(run_cli("recover --n 16 --m 3 --p 4 --s 1 --y 5 --verify").code, 4);
    EXPECT_EQ(run_cli("recover --n 16 --m 3 --p 4 --s 1 --y 4 --verify").code, 0);
    EXPECT_EQ(run_cli("find-offset --n 256 --m 5 --p 9 --s 20 --period 8").code, 4);
    EXPECT_EQ(run_cli("find-offset --n 256 --m 5 --p 9 --s 20").code, 0);
}

TEST(Cli, ByteIdenticalOutputFiles) {
    const auto dir = scratch_dir("determinism");
    for (const std::string cmd : {"trials --n 512 --m 4 --p 8 --s 5 --runs 100 --seed 9",
                                  "find-offset --n 512 --m 8 --p 8 --s 5 --seed 4 --format json",
                                  "spectrum --n 64 --m 5 --p 7 --s 2 --alg qhs"}) {
        ASSERT_EQ(run_cli(cmd + " --out " + (dir / "a").string()).code, 0);
        ASSERT_EQ(run_cli(cmd + " --out " + (dir / "b").string()).code, 0);
        std::ifstream a(dir / "a", std::ios::binary), b(dir / "b", std::ios::binary);
        const std::string sa((std::istreambuf_iterator<char>(a)), {}), sb((std::istreambuf_iterator<char>(b)), {});
        EXPECT_FALSE(sa.empty());
        EXPECT_EQ(sa, sb) << cmd;
    }
}
