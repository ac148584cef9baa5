#include "lurelab/experiments.hpp"
#include "lurelab/io.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace lurelab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("lurelab_io_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Io, FormatDoubleRoundTrips) {
  oracle::Gen g(5);
  for (int i = 0; i < 2000; ++i) {
    const double x = g.uniform(-1.0, 1.0) * std::pow(10.0, g.uniform(-300.0, 300.0));
    EXPECT_EQ(std::strtod(io::format_double(x).c_str(), nullptr), x);
  }
  EXPECT_EQ(io::format_double(0.5), "0.5");
  EXPECT_EQ(io::format_double(1.0), "1");
}

TEST(Io, WriteAtomicCreatesParentsAndLeavesNoTemp) {
  const auto dir = scratch("atomic");
  const auto file = dir / "a" / "b" / "out.txt";
  io::write_atomic(file, "first");
  io::write_atomic(file, "second");
  EXPECT_EQ(slurp(file), "second");
  int entries = 0;
  for (const auto& e : fs::directory_iterator(file.parent_path())) {
    (void)e;
    ++entries;
  }
  EXPECT_EQ(entries, 1);
  fs::remove_all(dir);
}

TEST(Io, TrajectoryCsvLayout) {
  const auto p = preset_one_mass();
  const auto tr = simulate(p.system, p.initial_conditions[0], zero_signal(1), 0.1, 0.05);
  const auto csv = io::trajectory_csv(tr, &p.P.P());
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t,x1,x2,norm,V_P");
  std::getline(in, line);
  EXPECT_EQ(line, "0,1,0,1,1");
  int rows = 1;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 3);
  EXPECT_EQ(io::trajectory_csv(tr).substr(0, 12), "t,x1,x2,norm");
}

TEST(Io, GapsCsvLayout) {
  GapSeries g;
  g.times = {0.0, 1.0};
  g.gap = {2.0, 1.0};
  g.forcing_integral = {0.0, 0.5};
  g.forcing_sup = {0.5, 0.5};
  EXPECT_EQ(io::gaps_csv(g), "t,gap,forcing_integral,forcing_sup\n0,2,0,0.5\n1,1,0.5,0.5\n");
  const std::vector<double> tail{0.25, 0.125};
  EXPECT_EQ(io::gaps_csv(g, &tail),
            "t,gap,forcing_integral,forcing_sup,tail_sup\n0,2,0,0.5,0.25\n1,1,0.5,0.5,0.125\n");
}

TEST(Io, ReadSampledCsv) {
  const auto dir = scratch("read");
  fs::create_directories(dir);
  {
    std::ofstream(dir / "ok.csv") << "t,v\n0,1\n0.5, 2\n\n1,-3e-1\n";
    std::ofstream(dir / "bare.csv") << "0,1\n1,2\n";
    std::ofstream(dir / "bad.csv") << "t,v\n0,1\n1,x\n";
  }
  const auto s = io::read_sampled_csv(dir / "ok.csv");
  EXPECT_EQ(s.times, (std::vector<double>{0.0, 0.5, 1.0}));
  EXPECT_EQ(s.values, (std::vector<double>{1.0, 2.0, -0.3}));
  EXPECT_EQ(io::read_sampled_csv(dir / "bare.csv").times.size(), 2u);
  EXPECT_THROW(io::read_sampled_csv(dir / "bad.csv"), ValidationError);
  EXPECT_THROW(io::read_sampled_csv(dir / "missing.csv"), ValidationError);
  fs::remove_all(dir);
}

TEST(Io, JsonTextEndsWithNewline) {
  const auto t = io::json_text({{"a", 1}});
  EXPECT_EQ(t.back(), '\n');
  EXPECT_EQ(nlohmann::json::parse(t).at("a"), 1);
}
