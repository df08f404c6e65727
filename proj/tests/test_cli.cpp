#include "rpod/cli.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

using namespace rpod;

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream is(line);
    std::string w;
    while (is >> w) out.push_back(w);
    return out;
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("rpod_test_" + name);
}

} // namespace

TEST(ParseArgs, SweepGrid) {
    const auto m = parse_args(split("sweep --sizes-km 1,10,100,500,1000 --impulses 4,8,16,32,64 --altitude-km 2000 "
                                    "--out results.csv"));
    EXPECT_EQ(m.subcommand, Subcommand::Sweep);
    EXPECT_EQ(m.sizes, (std::vector<double>{1, 10, 100, 500, 1000}));
    EXPECT_EQ(m.impulse_counts, (std::vector<int>{4, 8, 16, 32, 64}));
    EXPECT_EQ(m.config.chief_altitude, 2000.0);
    EXPECT_EQ(m.output_path, "results.csv");
    EXPECT_EQ(m.format, OutputFormat::Csv);
    EXPECT_TRUE(m.seedless);
}

TEST(ParseArgs, InterceptScenario) {
    const auto m = parse_args(split("intercept --altitude-km 2000 --duration-min 60 --impulses 8"));
    EXPECT_EQ(m.subcommand, Subcommand::Intercept);
    EXPECT_EQ(m.config.chief_altitude, 2000.0);
    EXPECT_EQ(m.config.duration, 3600.0);
    EXPECT_EQ(m.impulse_counts, std::vector<int>{8});
    EXPECT_EQ(m.config.intercept_start, Eigen::Vector2d(10.0, 0.0));
    EXPECT_EQ(m.config.intercept_end, Eigen::Vector2d(0.0, 0.0));
}

TEST(ParseArgs, CircumnavDefaultsToBothArms) {
    const auto m = parse_args(split("circumnav --size-km 750 --impulses 4 --truth cw --forced-period-min 90"));
    EXPECT_EQ(m.kinds, (std::vector<ManeuverKind>{ManeuverKind::NmcUnforced, ManeuverKind::CircleForced}));
    EXPECT_EQ(m.config.size, 750.0);
    EXPECT_EQ(m.config.truth, TruthModel::Cw);
    EXPECT_EQ(m.config.forced_period, 5400.0);
}

TEST(ParseArgs, MissingOutIsUsageError) {
    try {
        parse_args(split("sweep --sizes-km 1,10 --impulses 4"));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::UsageError);
        EXPECT_NE(std::string(e.what()).find("--out"), std::string::npos) << e.what();
    }
}

TEST(ParseArgs, OffendingFlagIsNamed) {
    for (const char* bad : {"sweep --sizes-km 1,-3 --impulses 4 --out x.csv", "circumnav --size-km 0 --impulses 8",
                            "intercept --duration-min abc", "circumnav --size-km 10 --impulses 8 --bogus 1"}) {
        try {
            parse_args(split(bad));
            FAIL() << bad;
        } catch (const Error& e) {
            EXPECT_EQ(e.kind(), ErrorKind::UsageError);
            EXPECT_NE(std::string(e.what()).find("--"), std::string::npos) << e.what();
        }
    }
    EXPECT_THROW(parse_args({}), Error);
}

TEST(Manifest, JsonRoundTripProperty) {
    auto g = test::rng(31);
    for (int i = 0; i < 200; ++i) {
        RunManifest m;
        m.subcommand = static_cast<Subcommand>(i % 4);
        m.config.kind = static_cast<ManeuverKind>(i % 4);
        m.config.truth = i % 2 ? TruthModel::Cw : TruthModel::TwoBody;
        m.config.chief_altitude = test::uniform(g, 100, 5000);
        m.config.size = test::uniform(g, 0.1, 2000);
        m.config.impulse_count = 3 + i % 60;
        m.config.duration = test::uniform(g, 0, 1e4);
        m.config.count_insertion_dv = i % 3 == 0;
        m.config.laps = 1 + i % 4;
        m.config.forced_period = test::uniform(g, 0, 1e4);
        m.config.intercept_start = {test::uniform(g, -50, 50), test::uniform(g, -50, 50)};
        m.config.mu = test::uniform(g, 1e5, 1e6);
        m.config.step.abs_tol = test::uniform(g, 1e-14, 1e-6);
        m.sizes = {test::uniform(g, 1, 1000), 1.0 / 3.0};
        m.impulse_counts = {4, 8 + i};
        m.kinds = {ManeuverKind::NmcUnforced};
        m.output_path = "out_" + std::to_string(i) + ".csv";
        m.format = i % 2 ? OutputFormat::Json : OutputFormat::Csv;
        m.threads = i % 5;
        const RunManifest back = manifest_from_json(nlohmann::json::parse(to_json(m).dump()));
        ASSERT_TRUE(back == m);
        ASSERT_EQ(back.config.size, m.config.size);
        ASSERT_EQ(back.sizes, m.sizes);
    }
}

TEST(Csv, RowsRoundTripAtSeventeenDigits) {
    auto g = test::rng(37);
    std::vector<ResultRow> rows;
    for (int i = 0; i < 300; ++i) {
        rows.push_back({i % 2 ? "nmc_unforced" : "circle_forced", test::uniform(g, 0, 1000), i,
                        test::uniform(g, 100, 3000), std::ldexp(test::uniform(g, 0, 1), -(i % 60)),
                        test::uniform(g, 0, 2), test::uniform(g, 0, 1e-6), test::uniform(g, 0, 1e5)});
    }
    rows.push_back({"intercept_forced", std::numeric_limits<double>::denorm_min(), 7,
                    std::numeric_limits<double>::max(), 0.1, 1.0 / 3.0, 0.0, 3600.0});
    std::stringstream ss;
    write_csv(ss, rows);
    EXPECT_EQ(parse_csv(ss), rows);
}

TEST(Csv, HeaderAndCardinality) {
    // 5 sizes x 5 counts x 2 arms = 50 campaigns.
    const auto m = parse_args(split("sweep --sizes-km 1,2,3,4,5 --impulses 4,5,6,7,8 --out unused.csv"));
    const RunOutput out = execute(m);
    ASSERT_EQ(out.rows.size(), 50u);
    ASSERT_EQ(out.pairs.size(), 25u);
    const std::string text = render(out.rows, m);
    std::istringstream is(text);
    std::string line;
    std::getline(is, line);
    EXPECT_EQ(line, kCsvHeader);
    int data = 0;
    while (std::getline(is, line)) ++data;
    EXPECT_EQ(data, 50);
    EXPECT_EQ(render(execute(m).rows, m), text);
}

TEST(EmitResults, WritesFileAndSummaries) {
    const auto path = temp_path("intercept.csv");
    auto m = parse_args(split("intercept --impulses 4,8 --out " + path.string()));
    std::ostringstream summary;
    emit_results(execute(m), m, summary);
    const std::string csv = read_file(path);
    EXPECT_EQ(csv.rfind(kCsvHeader, 0), 0u);
    const std::string s = summary.str();
    EXPECT_NE(s.find("impulses=4: unforced used less delta-v"), std::string::npos) << s;
    EXPECT_NE(s.find("impulses=8: unforced used less delta-v"), std::string::npos) << s;
    std::filesystem::remove(path);
}

TEST(EmitResults, JsonMirrorsCsvRows) {
    auto m = parse_args(split("circumnav --size-km 10 --impulses 8 --format json"));
    const RunOutput out = execute(m);
    const auto j = nlohmann::json::parse(render(out.rows, m));
    ASSERT_EQ(j.at("rows").size(), out.rows.size());
    for (std::size_t i = 0; i < out.rows.size(); ++i) EXPECT_EQ(row_from_json(j["rows"][i]), out.rows[i]);
    EXPECT_TRUE(manifest_from_json(j.at("manifest")) == m);
}

TEST(EmitResults, IoErrorOnUnwritablePath) {
    auto m = parse_args(split("circumnav --size-km 10 --impulses 4 --out /nonexistent-dir/x.csv"));
    std::ostringstream summary;
    try {
        emit_results(execute(m), m, summary);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::IoError);
    }
    EXPECT_THROW(emit_results(RunOutput{}, m, summary), Error);
}

TEST(RunCli, ExitCodes) {
    std::ostringstream out, err;
    EXPECT_EQ(run_cli(split("validate"), out, err), kExitOk);
    EXPECT_NE(out.str().find("PASS energy_drift_10_periods_rel residual="), std::string::npos) << out.str();
    std::ostringstream out2, err2;
    EXPECT_EQ(run_cli(split("validate --mu-km3-s2 -398600.4418"), out2, err2), kExitValidation);
    EXPECT_NE(out2.str().find("FAIL two_body_period_closure_km"), std::string::npos);
    std::ostringstream out3, err3;
    EXPECT_EQ(run_cli(split("sweep --sizes-km 1"), out3, err3), kExitUsage);
    std::ostringstream out4, err4;
    // A poisoned mu is a runtime physics error, not a usage error.
    EXPECT_EQ(run_cli(split("circumnav --size-km 1 --impulses 4 --altitude-km 1 --mu-km3-s2 -5"), out4, err4),
              kExitRuntime);
    std::ostringstream out5, err5;
    EXPECT_EQ(run_cli(split("--help"), out5, err5), kExitOk);
    EXPECT_NE(out5.str().find("sweep"), std::string::npos);
}

TEST(Binary, IdenticalManifestGivesByteIdenticalCsv) {
    const auto a = temp_path("det_a.csv");
    const auto b = temp_path("det_b.csv");
    const std::string base = std::string(RPOD_SIM_PATH) + " sweep --sizes-km 5,50 --impulses 4,8 --out ";
    ASSERT_EQ(std::system((base + a.string() + " > /dev/null").c_str()), 0);
    ASSERT_EQ(std::system((base + b.string() + " --threads 1 > /dev/null").c_str()), 0);
    const std::string ca = read_file(a);
    EXPECT_FALSE(ca.empty());
    EXPECT_EQ(ca, read_file(b));
    std::filesystem::remove(a);
    std::filesystem::remove(b);
}

TEST(Binary, UsageExitCode) {
    const int status = std::system((std::string(RPOD_SIM_PATH) + " sweep --sizes-km 1 2> /dev/null").c_str());
    ASSERT_TRUE(WIFEXITED(status));
    EXPECT_EQ(WEXITSTATUS(status), kExitUsage);
}
