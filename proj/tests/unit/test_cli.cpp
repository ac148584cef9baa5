#include "cli.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace fs = std::filesystem;
using lurelab::cli::run;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    ::unsetenv("LURELAB_OUT");
    root_ = fs::temp_directory_path() /
            ("lurelab_cli_" + std::to_string(::getpid()) + "_" +
             ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(root_);
    fs::create_directories(root_);
  }
  void TearDown() override {
    ::unsetenv("LURELAB_OUT");
    fs::remove_all(root_);
  }

  int call(std::vector<std::string> args) {
    args.insert(args.begin(), "lurelab");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    out_.str("");
    err_.str("");
    return run(static_cast<int>(argv.size()), argv.data(), out_, err_);
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  static nlohmann::json json_at(const fs::path& p) { return nlohmann::json::parse(slurp(p)); }

  fs::path write(const std::string& name, const std::string& text) {
    const auto p = root_ / name;
    std::ofstream(p) << text;
    return p;
  }

  fs::path root_;
  std::ostringstream out_, err_;
};

}  // namespace

TEST_F(Cli, SimulateWritesTrajectoryWithGivenStart) {
  const auto out = (root_ / "runs").string();
  ASSERT_EQ(call({"simulate", "--preset", "one-mass", "--forcing", "v_p", "--x0", "1,0", "--horizon", "1",
                  "--dt", "0.01", "--out", out}),
            0)
      << err_.str();
  const auto dir = root_ / "runs" / "one-mass" / "v_p";
  const auto csv = slurp(dir / "trajectories.csv");
  std::istringstream in(csv);
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  EXPECT_EQ(header, "t,x1,x2,norm,V_P");
  EXPECT_EQ(first.substr(0, 6), "0,1,0,");
  const auto rep = json_at(dir / "report.json");
  EXPECT_EQ(rep.at("x0"), nlohmann::json({1.0, 0.0}));
  EXPECT_TRUE(rep.at("pass").get<bool>());
}

TEST_F(Cli, EntrainMatchesSimulateByteForByte) {
  const auto a = (root_ / "a").string();
  const auto b = (root_ / "b").string();
  ASSERT_EQ(call({"simulate", "--preset", "two-mass", "--forcing", "v_s", "--horizon", "5", "--dt", "0.01", "--out", a}), 0);
  const int rc = call({"entrain", "--preset", "two-mass", "--forcing", "v_s", "--horizon", "5", "--dt", "0.01", "--out", b});
  EXPECT_TRUE(rc == 0 || rc == 1) << err_.str();
  EXPECT_EQ(slurp(root_ / "a" / "two-mass" / "v_s" / "trajectories.csv"),
            slurp(root_ / "b" / "two-mass" / "v_s" / "trajectories.csv"));
  for (const char* f : {"gaps.csv", "fits.json", "report.json"})
    EXPECT_TRUE(fs::exists(root_ / "b" / "two-mass" / "v_s" / f)) << f;
}

TEST_F(Cli, IdenticalStartsGiveZeroGap) {
  const auto out = (root_ / "runs").string();
  ASSERT_EQ(call({"entrain", "--preset", "one-mass", "--forcing", "v_p", "--x0", "0.3,0.1", "--x0-ref", "0.3,0.1",
                  "--horizon", "5", "--dt", "0.01", "--out", out}),
            0)
      << err_.str();
  std::istringstream in(slurp(root_ / "runs" / "one-mass" / "v_p" / "gaps.csv"));
  std::string line;
  std::getline(in, line);
  int rows = 0;
  while (std::getline(in, line)) {
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    EXPECT_EQ(line.substr(c1 + 1, c2 - c1 - 1), "0");
    ++rows;
  }
  EXPECT_EQ(rows, 501);
}

TEST_F(Cli, EnvironmentOverridesOut) {
  const auto env = root_ / "env";
  ::setenv("LURELAB_OUT", env.c_str(), 1);
  ASSERT_EQ(call({"simulate", "--preset", "one-mass", "--horizon", "1", "--dt", "0.1", "--out",
                  (root_ / "flag").string()}),
            0);
  EXPECT_TRUE(fs::exists(env / "one-mass" / "v_p" / "trajectories.csv"));
  EXPECT_FALSE(fs::exists(root_ / "flag"));
}

TEST_F(Cli, ConfigErrors) {
  const auto out = (root_ / "runs").string();
  EXPECT_EQ(call({"simulate", "--preset", "one-mass", "--dt", "0", "--out", out}), 2);
  EXPECT_EQ(call({"simulate", "--preset", "one-mass", "--dt", "-1", "--out", out}), 2);
  EXPECT_EQ(call({"simulate", "--preset", "nope", "--out", out}), 2);
  EXPECT_EQ(call({"simulate", "--preset", "one-mass", "--x0", "1,2,3", "--out", out}), 2);
  EXPECT_EQ(call({"simulate", "--preset", "one-mass", "--x0", "1,abc", "--out", out}), 2);
  EXPECT_EQ(call({"simulate", "--preset", "one-mass", "--forcing", "v_q", "--out", out}), 2);
  EXPECT_EQ(call({"launch"}), 2);
  EXPECT_EQ(call({"simulate", "--bogus"}), 2);
}

TEST_F(Cli, ConfigFileHandling) {
  const auto out = (root_ / "runs").string();
  const auto bad = write("bad.json", "{ \"version\": 1, ");
  EXPECT_EQ(call({"simulate", "--config", bad.string(), "--out", out}), 2);
  const auto unknown = write("unknown.json", R"({"version": 1, "colour": "red"})");
  EXPECT_EQ(call({"simulate", "--config", unknown.string(), "--out", out}), 2);
  const auto nover = write("nover.json", R"({"preset": "one-mass"})");
  EXPECT_EQ(call({"simulate", "--config", nover.string(), "--out", out}), 2);
  const auto other = write("other.json", R"({"version": 1, "command": "verify"})");
  EXPECT_EQ(call({"simulate", "--config", other.string(), "--out", out}), 2);
  EXPECT_EQ(call({"simulate", "--config", (root_ / "missing.json").string(), "--out", out}), 2);

  const auto good = write("good.json", R"({"version": 1, "preset": "one-mass", "forcing": "zero",
                                           "x0": [0.5, 0.0], "horizon": 2, "dt": 0.1})");
  ASSERT_EQ(call({"simulate", "--config", good.string(), "--out", out}), 0) << err_.str();
  const auto rep = json_at(root_ / "runs" / "one-mass" / "zero" / "report.json");
  EXPECT_EQ(rep.at("x0"), nlohmann::json({0.5, 0.0}));
  // Flags take precedence over the file.
  ASSERT_EQ(call({"simulate", "--config", good.string(), "--x0", "0.25,0", "--out", out}), 0);
  EXPECT_EQ(json_at(root_ / "runs" / "one-mass" / "zero" / "report.json").at("x0"), nlohmann::json({0.25, 0.0}));
}

TEST_F(Cli, ReplacedNonlinearityNeedsForce) {
  const auto out = (root_ / "runs").string();
  EXPECT_EQ(call({"simulate", "--preset", "one-mass", "--nonlinearity", "negated-identity", "--horizon", "1",
                  "--out", out}),
            2);
  EXPECT_EQ(call({"simulate", "--preset", "one-mass", "--nonlinearity", "negated-identity", "--force",
                  "--horizon", "1", "--dt", "0.01", "--out", out}),
            0);
}

TEST_F(Cli, VerifyLocatesFailure) {
  const auto out = (root_ / "runs").string();
  EXPECT_EQ(call({"verify", "--preset", "one-mass", "--nonlinearity", "negated-identity", "--radii", "1",
                  "--out", out}),
            1);
  EXPECT_NE(out_.str().find("A2=FAIL"), std::string::npos) << out_.str();
  EXPECT_NE(out_.str().find("witness"), std::string::npos);
  const auto rep = json_at(root_ / "runs" / "one-mass" / "verify" / "report.json");
  EXPECT_FALSE(rep.at("pass").get<bool>());
}

TEST_F(Cli, VerifyPassesOnTwoMass) {
  const auto out = (root_ / "runs").string();
  EXPECT_EQ(call({"verify", "--preset", "two-mass", "--radii", "1", "--out", out}), 0) << out_.str();
}

TEST_F(Cli, BlowUpExitCode) {
  const auto out = (root_ / "runs").string();
  // z'' = -z + z' under f = -id grows like e^{t/2}.
  EXPECT_EQ(call({"simulate", "--preset", "one-mass", "--nonlinearity", "negated-identity", "--force",
                  "--horizon", "60", "--dt", "0.01", "--out", out}),
            3);
  const auto rep = json_at(root_ / "runs" / "one-mass" / "v_p" / "report.json");
  EXPECT_TRUE(rep.contains("blow_up"));
  EXPECT_FALSE(rep.at("pass").get<bool>());
}

TEST_F(Cli, AnalyzePeriodicScan) {
  const auto out = (root_ / "runs").string();
  ASSERT_EQ(call({"analyze", "--signal", "v_p", "--horizon", "60", "--scan-periods", "--epsilon", "1e-6",
                  "--out", out}),
            0)
      << err_.str();
  const auto rep = json_at(root_ / "runs" / "analyze" / "v_p" / "report.json");
  for (const auto& e : rep.at("period_scan").at("declared_period_multiples"))
    EXPECT_LE(e.at("distance").get<double>(), 1e-12);
  EXPECT_TRUE(fs::exists(root_ / "runs" / "analyze" / "v_p" / "period_scan.csv"));
}

TEST_F(Cli, AnalyzeFourier) {
  const auto out = (root_ / "runs").string();
  ASSERT_EQ(call({"analyze", "--signal", "v_ap", "--horizon", "500", "--fourier", "2pi,2sqrt2pi", "--out", out}), 0)
      << err_.str();
  const auto rep = json_at(root_ / "runs" / "analyze" / "v_ap" / "report.json");
  for (const auto& e : rep.at("fourier")) EXPECT_NEAR(e.at("magnitude").get<double>(), 0.5, 1e-2);

  ASSERT_EQ(call({"analyze", "--signal", "zero", "--horizon", "50", "--fourier", "1,2", "--out", out}), 0);
  const auto z = json_at(root_ / "runs" / "analyze" / "zero" / "report.json");
  EXPECT_EQ(z.at("sup_norm").get<double>(), 0.0);
  for (const auto& e : z.at("fourier")) EXPECT_EQ(e.at("magnitude").get<double>(), 0.0);
}

TEST_F(Cli, AnalyzeSampledInput) {
  const auto out = (root_ / "runs").string();
  std::string csv = "t,v\n";
  for (int k = 0; k <= 2000; ++k) csv += std::to_string(k * 0.01) + ",1\n";
  const auto ok = write("flat.csv", csv);
  ASSERT_EQ(call({"analyze", "--sampled", ok.string(), "--horizon", "10", "--out", out}), 0) << err_.str();
  const auto rep = json_at(root_ / "runs" / "analyze" / "flat" / "report.json");
  EXPECT_NEAR(rep.at("stepanov_norm").at("value").get<double>(), 1.0, 1e-9);

  const auto bad = write("ragged.csv", "t,v\n0,1\n0.1,1\n0.35,1\n");
  EXPECT_EQ(call({"analyze", "--sampled", bad.string(), "--out", out}), 2);
}

TEST_F(Cli, LadderFlagsNegatedIdentity) {
  const auto out = (root_ / "runs").string();
  EXPECT_EQ(call({"ladder", "--preset", "one-mass", "--nonlinearity", "negated-identity", "--force", "--radii",
                  "1", "--horizon", "20", "--dt", "0.01", "--out", out}),
            1);
  EXPECT_TRUE(fs::exists(root_ / "runs" / "one-mass" / "v_p" / "fits.json"));
}
