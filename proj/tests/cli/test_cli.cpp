#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "ricb_cli/commands.hpp"
#include "ricb_cli/format.hpp"
#include "ricb_cli/svg.hpp"

using namespace ricb::cli;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) v.push_back(l);
  return v;
}

}  // namespace

TEST(Csv, DoublesRoundTrip) {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> mant(-1.0, 1.0);
  std::uniform_int_distribution<int> ex(-300, 300);
  for (int i = 0; i < 5000; ++i) {
    const double x = std::ldexp(mant(gen), ex(gen));
    EXPECT_EQ(parse_double(format_double(x)), x);
  }
  EXPECT_EQ(parse_double(format_double(5e-324)), 5e-324);
  EXPECT_TRUE(std::isnan(parse_double(format_double(std::nan("")))));
  EXPECT_THROW(parse_double("1.5x"), std::invalid_argument);
}

TEST(Csv, GridRowsRoundTrip) {
  GridRow a{0.1, 0.2, "BT", 0.9, 2.5, 0.1, 3.5, 0.3, 0.21, std::nullopt};
  GridRow b{0.5, 0.5, "BCT", 1.0 - 1e-16, 1.0 / 3.0, 1e-300, 4.0, std::nullopt, std::nullopt, 0.7};
  std::stringstream ss;
  write_grid_csv(ss, {a, b});
  const auto rows = read_grid_csv(ss);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], a);
  EXPECT_EQ(rows[1], b);
}

TEST(Format, HumanTablesUseThreeDigits) {
  EXPECT_EQ(format_sci(0.029123), "2.91e-02");
  EXPECT_EQ(format_sci(9.1e-32), "9.10e-32");
}

TEST(Cli, GridRowCountAndHeader) {
  const CliRun r = run({"grid", "--delta-range", "0.2", "0.8", "3", "--rho-range", "0.2", "0.8", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 10u);
  EXPECT_EQ(l[0], std::string(kGridHeader));
  std::stringstream ss(r.out);
  for (const auto& row : read_grid_csv(ss)) {
    ASSERT_TRUE(row.gamma_max.has_value());
    EXPECT_GT(*row.gamma_max, row.rho);
    EXPECT_GT(*row.gamma_min, row.rho);
    EXPECT_FALSE(row.nu_opt.has_value());
  }
}

TEST(Cli, BoundsBTBeatsBCT) {
  std::stringstream bt(run({"--format", "csv", "bounds", "--delta", "0.5", "--rho", "0.5"}).out);
  std::stringstream bct(
      run({"--format", "csv", "bounds", "--delta", "0.5", "--rho", "0.5", "--family", "BCT"}).out);
  const GridRow a = read_grid_csv(bt).at(0);
  const GridRow b = read_grid_csv(bct).at(0);
  EXPECT_LT(a.U, b.U);
  EXPECT_LT(a.L, b.L);
}

TEST(Cli, ExitCodes) {
  const CliRun bad = run({"bounds", "--delta", "1.5", "--rho", "0.5"});
  EXPECT_EQ(bad.code, kExitDomain);
  EXPECT_NE(bad.err.find("delta"), std::string::npos);
  EXPECT_EQ(run({"cover", "--N", "40", "--k", "20", "--m", "39", "--trials", "1"}).code, kExitGuard);
  EXPECT_EQ(run({"--out", "/nonexistent-dir/x.csv", "grid", "--delta-range", "0.2", "0.8", "2",
                 "--rho-range", "0.2", "0.8", "2"})
                .code,
            kExitIo);
  EXPECT_EQ(run({"nonsense"}).code, kExitDomain);
  EXPECT_EQ(run({"finite", "--k", "10", "--n", "5", "--N", "20", "--epsilon", "1e-3"}).code,
            kExitDomain);
  EXPECT_EQ(run({"--help"}).code, kExitOk);
}

TEST(Cli, FiniteEpsilonLimit) {
  const CliRun r = run({"--json", "finite", "--k", "100", "--n", "200", "--N", "2000", "--epsilon",
                     "1e-300"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("\"schema_version\""), std::string::npos);
}

TEST(Cli, EmpiricalReplaysBitIdentically) {
  const std::vector<std::string> args{"--seed", "77", "empirical", "--n", "20", "--N", "40,60",
                                      "--rho", "0.2,0.4", "--restarts", "3"};
  const CliRun a = run(args);
  const CliRun b = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(lines(a.out).size(), 5u);
  std::vector<std::string> threaded = args;
  threaded.insert(threaded.begin(), {"--threads", "3"});
  EXPECT_EQ(run(threaded).out, a.out);
}

TEST(Cli, OutputFileAndSvg) {
  const std::string path = ::testing::TempDir() + "ricb_grid.svg";
  const CliRun r = run({"--format", "svg", "--out", path, "grid", "--delta-range", "0.2", "0.8", "4",
                     "--rho-range", "0.2", "0.8", "4", "--families", "BT,BCT"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  EXPECT_EQ(ss.str().rfind("<svg", 0), 0u);
  EXPECT_NE(ss.str().find("U^BCT / U^BT"), std::string::npos);
  std::remove(path.c_str());
}

TEST(Cli, PhaseCurveOrdering) {
  const CliRun r = run({"phase", "--delta-steps", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 9u);
  for (int i = 1; i <= 4; ++i) {
    const auto bt = split_csv_line(l[i]);
    const auto bct = split_csv_line(l[i + 4]);
    EXPECT_EQ(bt[1], "BT");
    EXPECT_EQ(bct[1], "BCT");
    EXPECT_GE(parse_double(bt[2]), parse_double(bct[2]));
  }
}

TEST(Cli, CoverUniverseSupersetNeverFails) {
  const CliRun r = run({"--format", "csv", "cover", "--N", "10", "--k", "3", "--m", "10", "--trials", "50"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto f = split_csv_line(lines(r.out).at(1));
  EXPECT_EQ(f[6], "0");
}

TEST(Svg, ColorMapEndpoints) {
  EXPECT_EQ(color_for(0.0), "#440154");
  EXPECT_EQ(color_for(1.0), "#fde725");
  EXPECT_EQ(color_for(0.5), "#21918c");
  EXPECT_EQ(color_for(std::nan("")), "#d0d0d0");
}
