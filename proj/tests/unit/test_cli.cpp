#include "ecft/cli.hpp"

#include <filesystem>
#include <fstream>
#include <algorithm>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "ecft/distributions.hpp"
#include "ecft/errors.hpp"

namespace ecft {
namespace {

namespace fs = std::filesystem;

struct Result {
    int status;
    std::string out;
    std::string err;
};

class CliTest : public testing::Test {
  protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("ecft_cli_" + std::string(testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
        cache_ = (dir_ / "regions.json").string();
    }
    void TearDown() override { fs::remove_all(dir_); }

    Result run(std::vector<std::string> args) {
        std::ostringstream out;
        std::ostringstream err;
        const int status = cli::run(args, out, err);
        return {status, out.str(), err.str()};
    }

    std::string write_sample(const std::string& name, const std::vector<double>& values) {
        const auto path = dir_ / name;
        std::ofstream f(path);
        f.precision(17);
        for (double v : values) f << v << '\n';
        return path.string();
    }

    fs::path dir_;
    std::string cache_;
};

TEST(SizeListTest, ExplicitAndEllipsis) {
    EXPECT_EQ(cli::parse_size_list("15,30,100"), (std::vector<std::size_t>{15, 30, 100}));
    const auto grid = cli::parse_size_list("50,100,...,2000");
    EXPECT_EQ(grid.size(), 40u);
    EXPECT_EQ(grid.front(), 50u);
    EXPECT_EQ(grid.back(), 2000u);
    EXPECT_EQ(cli::parse_size_list("10,20,...,50,75"), (std::vector<std::size_t>{10, 20, 30, 40, 50, 75}));
    EXPECT_THROW((void)cli::parse_size_list("10,x"), ParseError);
    EXPECT_THROW((void)cli::parse_size_list("10,...,50"), ParseError);
    EXPECT_THROW((void)cli::parse_size_list(""), ParseError);
}

TEST(ObservationTest, SkipsCommentsAndBlankLines) {
    std::istringstream in("# header\n1.5\n\n-2\n  3e-1 \n");
    EXPECT_EQ(cli::parse_observations(in), (std::vector<double>{1.5, -2.0, 0.3}));
}

TEST(ObservationTest, ErrorNamesLine) {
    std::istringstream in("1\n2\nabc\n");
    try {
        (void)cli::parse_observations(in);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
    }
}

TEST_F(CliTest, UsageErrors) {
    EXPECT_EQ(run({}).status, cli::kExitUsage);
    EXPECT_EQ(run({"calibrate"}).status, cli::kExitUsage);
    EXPECT_NE(run({"calibrate", "--n", "30", "--alpha", "0.6", "--cache", cache_}).status, cli::kExitOk);
    EXPECT_NE(run({"calibrate", "--n", "30", "--test", "bogus", "--cache", cache_}).status, cli::kExitOk);
    EXPECT_EQ(run({"--help"}).status, cli::kExitOk);
}

TEST_F(CliTest, CalibrateIsByteReproducible) {
    const std::vector<std::string> args{"calibrate", "--n", "15,30", "--m", "10000", "--seed", "42", "--cache", cache_};
    const auto first = run(args);
    ASSERT_EQ(first.status, cli::kExitOk) << first.err;
    EXPECT_EQ(first.out.rfind("n,p025,p975,m,seed\n", 0), 0u) << first.out;
    EXPECT_EQ(std::count(first.out.begin(), first.out.end(), '\n'), 3);
    fs::remove(cache_);
    auto threaded = args;
    threaded.insert(threaded.end(), {"--threads", "3"});
    EXPECT_EQ(run(threaded).out, first.out);
    EXPECT_TRUE(fs::exists(cache_));
}

TEST_F(CliTest, CalibrateMultipleTestsAddsColumn) {
    const auto r = run({"calibrate", "--test", "ecft,sw", "--n", "30", "--m", "10000", "--cache", cache_});
    ASSERT_EQ(r.status, cli::kExitOk) << r.err;
    EXPECT_EQ(r.out.rfind("test,n,p025,p975,m,seed\n", 0), 0u) << r.out;
}

TEST_F(CliTest, TestSubcommandDecisions) {
    const auto normal = write_sample("normal.txt", sample(DistributionSpec::normal(), 50, Seed(2024)));
    auto r = run({"test", "--data", normal, "--m", "10000", "--cache", cache_});
    ASSERT_EQ(r.status, cli::kExitOk) << r.err;
    EXPECT_EQ(r.out.rfind("test,n,statistic,kind,lower,upper,decision,p_value,m,seed,convention\n", 0), 0u);
    EXPECT_NE(r.out.find("fail_to_reject"), std::string::npos) << r.out;

    const auto uniform = write_sample("uniform.txt", sample(DistributionSpec::uniform01(), 2000, Seed(5)));
    r = run({"test", "--data", uniform, "--test", "ecft,sw", "--m", "10000", "--cache", cache_});
    ASSERT_EQ(r.status, cli::kExitOk) << r.err;
    EXPECT_EQ(r.out.find("fail_to_reject"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find(",reject,"), std::string::npos) << r.out;
}

TEST_F(CliTest, TestSubcommandErrors) {
    const auto constant = write_sample("constant.txt", std::vector<double>(20, 3.25));
    auto r = run({"test", "--data", constant, "--m", "10000", "--cache", cache_});
    EXPECT_EQ(r.status, cli::kExitFailure);
    EXPECT_FALSE(r.err.empty());

    std::ofstream(dir_ / "bad.txt") << "1\n2\nthree\n";
    r = run({"test", "--data", (dir_ / "bad.txt").string(), "--cache", cache_});
    EXPECT_EQ(r.status, cli::kExitFailure);
    EXPECT_NE(r.err.find("line 3"), std::string::npos) << r.err;

    const auto normal = write_sample("normal.txt", sample(DistributionSpec::normal(), 40, Seed(1)));
    r = run({"test", "--data", normal, "--no-simulate", "--cache", cache_});
    EXPECT_EQ(r.status, cli::kExitFailure);
    EXPECT_NE(r.err.find("calibrate"), std::string::npos) << r.err;

    r = run({"test", "--data", (dir_ / "missing.txt").string(), "--cache", cache_});
    EXPECT_EQ(r.status, cli::kExitFailure);
}

TEST_F(CliTest, NoSimulateUsesCachedRegion) {
    ASSERT_EQ(run({"calibrate", "--n", "40", "--m", "10000", "--cache", cache_}).status, cli::kExitOk);
    const auto normal = write_sample("normal.txt", sample(DistributionSpec::normal(), 40, Seed(1)));
    const auto r = run({"test", "--data", normal, "--no-simulate", "--m", "10000", "--cache", cache_});
    ASSERT_EQ(r.status, cli::kExitOk) << r.err;
    EXPECT_NE(r.out.find(",NA,"), std::string::npos) << r.out;
}

TEST_F(CliTest, PowerRequiresCalibration) {
    auto r = run({"power", "--tests", "ecft", "--dist", "uniform01", "--n", "15", "--m", "500", "--cache", cache_});
    EXPECT_EQ(r.status, cli::kExitFailure);
    EXPECT_NE(r.err.find("auto-calibrate"), std::string::npos) << r.err;

    r = run({"power", "--tests", "ecft", "--dist", "uniform01", "--dist", "mixture:2,0.2", "--n", "15", "--m", "500",
             "--cal-m", "10000", "--auto-calibrate", "--cache", cache_});
    ASSERT_EQ(r.status, cli::kExitOk) << r.err;
    EXPECT_EQ(r.out.rfind("distribution,n,test,proportion,m,seed\n", 0), 0u) << r.out;
    EXPECT_NE(r.out.find("\"mixture:2,0.2\",15,ecft,"), std::string::npos) << r.out;
}

TEST_F(CliTest, PowerJsonOutputToFile) {
    const auto path = (dir_ / "power.json").string();
    const auto r = run({"power", "--tests", "ecft,jb", "--dist", "t:4", "--n", "30", "--m", "300", "--cal-m", "10000",
                        "--auto-calibrate", "--format", "json", "-o", path, "--cache", cache_});
    ASSERT_EQ(r.status, cli::kExitOk) << r.err;
    std::ifstream in(path);
    const auto j = nlohmann::json::parse(in);
    EXPECT_EQ(j.at("cells").size(), 2u);
}

TEST_F(CliTest, NullDistributionOutputs) {
    auto r = run({"nulldist", "--n", "20", "--m", "1000", "--cache", cache_});
    ASSERT_EQ(r.status, cli::kExitOk) << r.err;
    EXPECT_EQ(r.out.rfind("n,replicate,value\n", 0), 0u);
    EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 1001);

    r = run({"nulldist", "--curve", "variance", "--n", "15,30", "--m", "1000"});
    ASSERT_EQ(r.status, cli::kExitOk) << r.err;
    EXPECT_EQ(r.out.rfind("n,mc_variance,asymptotic_variance,m,seed\n", 0), 0u) << r.out;

    r = run({"nulldist", "--curve", "ci", "--n", "15,30", "--m", "1000", "--level", "0.9"});
    ASSERT_EQ(r.status, cli::kExitOk) << r.err;
    EXPECT_EQ(r.out.rfind("n,simulated_lower,simulated_upper,asymptotic_lower,asymptotic_upper,level,m,seed\n", 0),
              0u)
        << r.out;
}

}  // namespace
}  // namespace ecft
