#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "oddity/free_fermion.hpp"
#include "oddity/report.hpp"
#include "oddity/scaling.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
};

fs::path scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("oddity_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

CliResult run(const std::string& args) {
  const fs::path out = scratch() / "stdout.txt";
  const std::string cmd =
      std::string(VERTEX_ODDITY_BIN) + " " + args + " > " + out.string() + " 2> " +
      (scratch() / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  r.out = ss.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Data rows of a CSV document, split on commas.
std::vector<std::vector<std::string>> rows(const std::string& csv) {
  std::vector<std::vector<std::string>> out;
  std::istringstream in(csv);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    out.push_back(cells);
  }
  return out;
}

}  // namespace

TEST(Cli, ScanAtHalf) {
  const CliResult r = run("scan-ed --delta 0.5 --L 5:9:2");
  ASSERT_EQ(r.code, 0);
  const auto t = rows(r.out);
  ASSERT_EQ(t.size(), 3u);
  EXPECT_EQ(t[0][0], "5");
  EXPECT_EQ(t[0][1], "3");
  EXPECT_NEAR(std::stod(t[0][5]), 0.16, 1e-12);
  EXPECT_EQ(t[0][6].size(), 5u);
  EXPECT_NE(r.out.find("L,N_up,delta,energy,S_inf,p_max,argmax_config,degenerate"), std::string::npos);
}

TEST(Cli, EvenBranchAtFreeFermions) {
  const CliResult r = run("scan-ed --delta 0 --L 4:12:2");
  ASSERT_EQ(r.code, 0);
  for (const auto& row : rows(r.out)) {
    EXPECT_NEAR(std::stod(row[4]), std::stoi(row[0]) / 2 * std::numbers::ln2, 1e-8);
  }
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run("scan-ed --delta 0.5 --L ''").code, 2);
  EXPECT_EQ(run("scan-ed --delta 0.5").code, 2);
  EXPECT_EQ(run("scan-ed --delta 0.5 --L 9:5").code, 2);
  EXPECT_EQ(run("xx-diff --N 0").code, 2);
  EXPECT_EQ(run("fig2c --L 6:10:2").code, 2);
  EXPECT_EQ(run("scan-ed --delta 0.5 --L 5 --backend imps").code, 2);
  EXPECT_EQ(run("scan-ed --delta 0.5 --L 5 --format xml").code, 2);
  EXPECT_EQ(run("nonsense").code, 2);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("--help").code, 0);
}

TEST(Cli, SizingErrorExitCode) {
  EXPECT_EQ(run("scan-ed --delta 0.5 --L 63").code, 3);
}

TEST(Cli, XxDiffTable) {
  const CliResult r = run("xx-diff --N 2:25");
  ASSERT_EQ(r.code, 0);
  const auto t = rows(r.out);
  ASSERT_EQ(t.size(), 24u);
  std::vector<oddity::ScalingPoint> pts;
  for (const auto& row : t) pts.push_back({std::stod(row[1]), std::stod(row[2])});
  EXPECT_NEAR(oddity::fit_scaling(pts).b, 0.2566, 0.002);
}

TEST(Cli, XxDiffSingleRow) {
  const CliResult r = run("xx-diff --N 2");
  ASSERT_EQ(r.code, 0);
  const auto t = rows(r.out);
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t[0][1], "5");
  EXPECT_NEAR(std::stod(t[0][2]), oddity::xx_entropy_difference_direct(2), 1e-10);
}

TEST(Cli, Fig2cFreeFermionPoint) {
  const CliResult r = run("fig2c --delta 0");
  ASSERT_EQ(r.code, 0);
  const auto t = rows(r.out);
  ASSERT_EQ(t.size(), 1u);
  EXPECT_NEAR(std::stod(t[0][1]), 0.25, 0.05);
  EXPECT_NEAR(std::stod(t[0][5]), 0.25, 1e-15);
}

TEST(Cli, Fig2cSkipsNonCritical) {
  const CliResult r = run("fig2c --delta -1,0 --L 5:11:2 --backend imps");
  ASSERT_EQ(r.code, 0);
  const auto t = rows(r.out);
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t[0][3], "nan");
  EXPECT_NE(r.out.find("non-critical"), std::string::npos);
  EXPECT_NE(t[1][3], "nan");
}

TEST(Cli, VerifyFilterAndFault) {
  const CliResult ok = run("verify --filter coulomb");
  EXPECT_EQ(ok.code, 0);
  EXPECT_NE(ok.out.find("coulomb/q4"), std::string::npos);
  EXPECT_EQ(ok.out.find("ed/"), std::string::npos);
  const CliResult bad = run("verify --filter coulomb --inject-fault coulomb/q2");
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.out.find("FAIL coulomb/q2"), std::string::npos);
  EXPECT_NE(bad.out.find("PASS coulomb/q4"), std::string::npos);
  EXPECT_EQ(run("verify --filter nothing-here").code, 2);
}

TEST(Cli, VerifyDefaultRunPasses) {
  const CliResult r = run("verify --jobs 2");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}

TEST(Cli, OutputIsDeterministic) {
  const fs::path a = scratch() / "a.csv";
  const fs::path b = scratch() / "b.csv";
  ASSERT_EQ(run("scan-ed --delta -0.3,0.7 --L 7:13:2 --jobs 1 --out " + a.string()).code, 0);
  ASSERT_EQ(run("scan-ed --delta -0.3,0.7 --L 7:13:2 --jobs 3 --out " + b.string()).code, 0);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_FALSE(slurp(a).empty());
}

TEST(Cli, JsonOutput) {
  const CliResult r = run("imps-scan --delta 0.5 --L 5:9:2 --format json");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j["rows"].size(), 3u);
  EXPECT_NEAR(j["rows"][0]["alpha"].get<double>(), 1.0 / 3.0, 1e-15);
  EXPECT_EQ(j["config"]["subcommand"], "imps-scan");
}

TEST(Cli, CoulombTable) {
  const CliResult r = run("coulomb --L 2:8");
  ASSERT_EQ(r.code, 0);
  for (const auto& row : rows(r.out)) EXPECT_LT(std::stod(row[5]), 1e-10);
}

TEST(Cli, CacheReuse) {
  const fs::path cache = scratch() / "cache";
  const std::string env = "VERTEX_ODDITY_CACHE=" + cache.string() + " ";
  const std::string args = "scan-ed --delta 0.25 --L 9:11:2";
  const std::string cmd1 = env + VERTEX_ODDITY_BIN + " " + args + " > " + (scratch() / "c1").string();
  const std::string cmd2 = env + VERTEX_ODDITY_BIN + " " + args + " > " + (scratch() / "c2").string();
  ASSERT_EQ(std::system(cmd1.c_str()), 0);
  EXPECT_EQ(std::distance(fs::directory_iterator(cache), fs::directory_iterator{}), 2);
  ASSERT_EQ(std::system(cmd2.c_str()), 0);
  EXPECT_EQ(slurp(scratch() / "c1"), slurp(scratch() / "c2"));
}
