#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "cli.hpp"
#include "torus_stri/quadruple.hpp"

namespace torus {
namespace {

namespace fs = std::filesystem;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Result r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("torus_stri_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const auto p = (dir_ / name).string();
    std::ofstream(p) << text;
    return p;
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

std::vector<std::string> csv_row(const std::string& text, std::size_t row) {
  std::istringstream in(text);
  std::string line;
  for (std::size_t i = 0; i <= row; ++i) std::getline(in, line);
  std::vector<std::string> cells;
  std::stringstream ls(line);
  std::string cell;
  while (std::getline(ls, cell, ',')) cells.push_back(cell);
  return cells;
}

TEST_F(CliTest, EnumerateSquare) {
  const auto r = run({"enumerate", write("sq.txt", "0 0 1\n1 0 1\n0 1 1\n1 1 1\n"), "--tau-histogram"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "tau,count,weighted_sum\n0,36,36\n");
}

TEST_F(CliTest, EnumerateCollinear) {
  const auto r = run({"enumerate", write("c.txt", "-1 0 1\n0 0 1\n1 0 1\n")});
  EXPECT_EQ(r.out, "tau,count,weighted_sum\n0,15,15\n2,4,4\n");
  const auto g = run({"enumerate", write("gap.txt", "0 0 1\n2 0 1\n"), "--backend", "grid-fast"});
  EXPECT_EQ(g.code, 2);
  EXPECT_NE(g.err.find("error_code=grid_fast_requires_box"), std::string::npos);
}

TEST_F(CliTest, EnumerateEmpty) {
  const auto r = run({"enumerate", write("e.txt", "# nothing\n")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("error_code=empty_spectrum"), std::string::npos);
  EXPECT_NE(r.err.find("empty spectrum"), std::string::npos);
}

TEST_F(CliTest, EnumerateMalformedReportsLine) {
  const auto r = run({"enumerate", write("m.txt", "0 0 1\n0 0\n")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("m.txt:2"), std::string::npos);
}

TEST_F(CliTest, EnumerateCap) {
  std::string text;
  for (int i = 0; i < 30; ++i) text += std::to_string(i) + " " + std::to_string(i * i % 7) + " 1\n";
  const auto r = run({"enumerate", write("big.txt", text), "--cap", "10"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("error_code=generic_cap"), std::string::npos);
  EXPECT_NE(r.err.find("cap"), std::string::npos);
}

TEST_F(CliTest, EnumerateDyadicToFile) {
  const auto r = run({"enumerate", write("c.txt", "-1 0 1\n0 0 1\n1 0 1\n"), "--dyadic", "-o", path("d.csv")});
  EXPECT_EQ(r.code, 0);
  std::ifstream in(path("d.csv"));
  std::stringstream s;
  s << in.rdbuf();
  EXPECT_EQ(s.str(), "M,count,weighted_sum\n0,15,15\n2,4,4\n");
}

TEST_F(CliTest, StrichartzGridOne) {
  const auto r = run({"strichartz", "--set", "grid:1", "--T", "full"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto cells = csv_row(r.out, 1);
  ASSERT_EQ(cells.size(), 8u);
  const double ratio = std::stod(cells[5]);
  const double e0 = static_cast<double>(box_rectangle_count(Box::centered(1)));
  EXPECT_NEAR(std::pow(ratio, 4), e0 / (kTwoPi * 81.0), 1e-14);
}

TEST_F(CliTest, StrichartzSinglePoint) {
  const auto r = run({"strichartz", "--set", "file:" + write("single.txt", "0 0 1\n"), "--T", "full"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(std::stod(csv_row(r.out, 1)[5]), std::pow(kTwoPi, -0.25), 1e-15);
}

TEST_F(CliTest, StrichartzMethodsAgree) {
  const auto a = run({"strichartz", "--set", "random:40:6:5", "--T", "0.8", "--method", "exact"});
  const auto b = run({"strichartz", "--set", "random:40:6:5", "--T", "0.8", "--method", "quadrature"});
  ASSERT_EQ(a.code, 0);
  ASSERT_EQ(b.code, 0);
  const double ra = std::stod(csv_row(a.out, 1)[5]), rb = std::stod(csv_row(b.out, 1)[5]);
  EXPECT_NEAR(ra, rb, 1e-9 * ra);
}

TEST_F(CliTest, StrichartzLocalAndErrors) {
  const auto r = run({"strichartz", "--set", "grid:2", "--T", "local"});
  EXPECT_NEAR(std::stod(csv_row(r.out, 1)[2]), 1.0 / std::log(25.0), 1e-15);
  EXPECT_EQ(run({"strichartz", "--set", "grid:2", "--T", "-1"}).code, 2);
  EXPECT_EQ(run({"strichartz", "--set", "grid:x"}).code, 2);
  EXPECT_EQ(run({"strichartz", "--set", "grid:2", "--method", "simpson"}).code, 2);
  EXPECT_EQ(run({"strichartz", "--set", "file:" + path("missing.txt")}).code, 2);
}

TEST_F(CliTest, Incidence) {
  auto r = run({"incidence", "--set", "grid:1", "--k", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(csv_row(r.out, 1)[2], "8");
  r = run({"incidence", "--set", "file:" + write("t.txt", "0 0 1\n3 1 1\n1 5 1\n"), "--k", "2"});
  EXPECT_EQ(csv_row(r.out, 1)[2], "3");
  r = run({"incidence", "--set", "grid:8", "--decompose", "--out-dir", path("inc")});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(path("inc/decomposition.csv"));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "n,l2_norm,halved");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(line.substr(line.rfind(',') + 1), "true");
  }
  EXPECT_GT(rows, 0);
  EXPECT_TRUE(fs::exists(path("inc/rich_lines.csv")));
}

TEST_F(CliTest, DecomposeAndBins) {
  auto r = run({"decompose", "--set", "random:200:10:3", "--C", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, 17), "n,l2_norm,halved\n");
  r = run({"bins", "--set", "grid:3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, 42), "j1,j2,j3,j4,a1,a2,a3,a4,count,gcd_weighted");
  EXPECT_EQ(run({"bins", "--set", "grid:30", "--cap", "100"}).code, 3);
  EXPECT_EQ(run({"decompose", "--set", "grid:3", "--C", "-1"}).code, 2);
}

TEST_F(CliTest, NlsZeroData) {
  const auto r = run({"nls", write("z.json", R"({"delta": 0, "windows": 3})"), "--out-dir", path("z")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("\"K_obs\": 1.0"), std::string::npos);
  EXPECT_TRUE(fs::exists(path("z/trajectory.csv")));
  EXPECT_TRUE(fs::exists(path("z/summary.json")));
}

TEST_F(CliTest, NlsPlaneWaveAndDefaultDrift) {
  const auto r = run({"nls", write("p.json", R"({"windows": 20, "plane_wave": {}})"), "--out-dir", path("p")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto pos = r.out.find("\"plane_wave_error\": ");
  ASSERT_NE(pos, std::string::npos);
  EXPECT_LE(std::stod(r.out.substr(pos + 20)), 1e-6);
  const auto md = r.out.find("\"mass_drift\": ");
  ASSERT_NE(md, std::string::npos);
  EXPECT_LE(std::stod(r.out.substr(md + 14)), 1e-12);
}

TEST_F(CliTest, NlsBadConfig) {
  const auto r = run({"nls", write("b.json", R"({"N0": 12})")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("error_code=invalid_config"), std::string::npos);
  EXPECT_EQ(run({"nls", path("none.json")}).code, 2);
}

TEST_F(CliTest, ScanReproducibleAcrossThreads) {
  const auto a = run({"--threads", "1", "extremizer-scan", "--N", "2,4"});
  const auto b = run({"--threads", "4", "extremizer-scan", "--N", "2,4"});
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  const auto c = run({"--threads", "1", "strichartz", "--set", "random:60:8:2", "--method", "quadrature"});
  const auto d = run({"--threads", "3", "strichartz", "--set", "random:60:8:2", "--method", "quadrature"});
  EXPECT_EQ(c.out, d.out);
  const auto e = run({"--threads", "1", "enumerate", write("r.txt", "0 0 1\n1 2 0.5\n3 1 0.25\n2 2 1\n")});
  const auto f = run({"--threads", "4", "enumerate", path("r.txt")});
  EXPECT_EQ(e.out, f.out);
}

TEST_F(CliTest, UsageErrors) {
  auto r = run({});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("error_code=usage"), std::string::npos);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"--threads", "0", "selftest"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(CliTest, Selftest) {
  const auto r = run({"selftest"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}

}  // namespace
}  // namespace torus
