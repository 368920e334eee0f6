#include <cstdlib>
#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "oddity/errors.hpp"
#include "oddity/report.hpp"

using namespace oddity;

TEST(Ranges, IntegerForms) {
  EXPECT_EQ(parse_int_range("5:11:2"), (std::vector<int>{5, 7, 9, 11}));
  EXPECT_EQ(parse_int_range("2:5"), (std::vector<int>{2, 3, 4, 5}));
  EXPECT_EQ(parse_int_range("7"), (std::vector<int>{7}));
  EXPECT_EQ(parse_int_range("4:8:2,11"), (std::vector<int>{4, 6, 8, 11}));
  EXPECT_EQ(parse_int_range("5:10:2"), (std::vector<int>{5, 7, 9}));
}

TEST(Ranges, IntegerErrors) {
  EXPECT_THROW(parse_int_range(""), DomainError);
  EXPECT_THROW(parse_int_range("9:5"), DomainError);
  EXPECT_THROW(parse_int_range("1:5:0"), DomainError);
  EXPECT_THROW(parse_int_range("a:b"), DomainError);
  EXPECT_THROW(parse_int_range("1:2:3:4"), DomainError);
}

TEST(Ranges, DeltaForms) {
  EXPECT_EQ(parse_delta_spec("0.5"), (std::vector<double>{0.5}));
  const auto g = parse_delta_spec("-1:1:20");
  ASSERT_EQ(g.size(), 20u);
  EXPECT_EQ(g.back(), 1.0);
  EXPECT_NEAR(g.front(), -0.9, 1e-15);
  EXPECT_EQ(parse_delta_spec("0,0.5,1"), (std::vector<double>{0.0, 0.5, 1.0}));
  EXPECT_THROW(parse_delta_spec("1:0:4"), DomainError);
  EXPECT_THROW(parse_delta_spec("x"), DomainError);
  EXPECT_THROW(parse_delta_spec("0:1"), DomainError);
}

TEST(Format, FullPrecision) {
  EXPECT_EQ(format_double(0.5), "5.0000000000000000e-01");
  EXPECT_EQ(format_double(std::nan("")), "nan");
  const double x = 0.1 + 0.2;
  EXPECT_EQ(std::strtod(format_double(x).c_str(), nullptr), x);
}

namespace {

Table sample() {
  Table t;
  t.columns = {"L", "x", "s"};
  t.rows.push_back({7LL, 0.25, std::string("0101")});
  t.rows.push_back({9LL, std::nan(""), std::string("1")});
  t.notes.push_back("hello");
  return t;
}

RunConfig config() {
  RunConfig c;
  c.subcommand = "scan-ed";
  c.sizes_spec = "7:9:2";
  c.jobs = 4;
  return c;
}

}  // namespace

TEST(Write, CsvLayout) {
  std::ostringstream out;
  write_table(out, sample(), config(), OutputFormat::kCsv);
  const std::string s = out.str();
  EXPECT_EQ(s.rfind("# vertex-oddity ", 0), 0u);
  EXPECT_NE(s.find("# config {\"subcommand\":\"scan-ed\""), std::string::npos);
  EXPECT_NE(s.find("# hello\nL,x,s\n7,2.5000000000000000e-01,0101\n9,nan,1\n"), std::string::npos);
}

TEST(Write, JobCountDoesNotChangeOutput) {
  std::ostringstream a;
  std::ostringstream b;
  RunConfig c1 = config();
  RunConfig c2 = config();
  c2.jobs = 1;
  write_table(a, sample(), c1, OutputFormat::kCsv);
  write_table(b, sample(), c2, OutputFormat::kCsv);
  EXPECT_EQ(a.str(), b.str());
}

TEST(Write, JsonMirrorsColumns) {
  std::ostringstream out;
  write_table(out, sample(), config(), OutputFormat::kJson);
  const auto j = nlohmann::json::parse(out.str());
  EXPECT_EQ(j["columns"].size(), 3u);
  EXPECT_EQ(j["rows"][0]["L"], 7);
  EXPECT_EQ(j["rows"][0]["x"], 0.25);
  EXPECT_TRUE(j["rows"][1]["x"].is_null());
  EXPECT_EQ(j["config"]["L"], "7:9:2");
  EXPECT_EQ(j["version"], ODDITY_VERSION);
}

TEST(Tables, ScanSchema) {
  ScanRow ok;
  ok.sites = 5;
  ok.n_up = 3;
  ok.delta = 0.5;
  ok.energy = -7.5;
  ok.p_max = 0.16;
  ok.s_inf = -std::log(0.16);
  ok.argmax = config_from_string("11010");
  ScanRow bad = ok;
  bad.error = "boom";
  const Table t = scan_table({ok, bad});
  EXPECT_EQ(t.columns, (std::vector<std::string>{"L", "N_up", "delta", "energy", "S_inf", "p_max",
                                                 "argmax_config", "degenerate"}));
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(std::get<std::string>(t.rows[0][6]), "11010");
  ASSERT_EQ(t.notes.size(), 1u);
}

TEST(Tables, OtherSchemas) {
  EXPECT_EQ(xx_diff_table({}).columns, (std::vector<std::string>{"N", "L_odd", "S_diff", "logdetW"}));
  EXPECT_EQ(coulomb_report({}).columns,
            (std::vector<std::string>{"beta", "L", "N", "Q_exact", "Q_bruteforce", "rel_err"}));
  EXPECT_EQ(imps_table({}).columns, (std::vector<std::string>{"alpha", "delta", "L", "S_inf_imps"}));
  EXPECT_EQ(fig2c_table({}).columns, (std::vector<std::string>{"delta", "b_ed", "stderr_ed", "b_imps",
                                                               "stderr_imps", "alpha_theory"}));
}

TEST(Cache, RoundTripIsBitExact) {
  const auto dir = std::filesystem::temp_directory_path() / "oddity_cache_test";
  std::filesystem::remove_all(dir);
  const DirectoryCache cache(dir);
  ScanRow row;
  row.sites = 7;
  row.n_up = 4;
  row.delta = 0.1;
  row.energy = -1.0 / 3.0;
  row.s_inf = std::sqrt(2.0);
  row.p_max = std::exp(-std::sqrt(2.0));
  row.argmax = config_from_string("1101010");
  row.degenerate = true;
  cache.store(row, XySign::kMinus);
  const auto hit = cache.load({7, 4}, 0.1, XySign::kMinus);
  ASSERT_TRUE(hit);
  EXPECT_EQ(hit->energy, row.energy);
  EXPECT_EQ(hit->s_inf, row.s_inf);
  EXPECT_EQ(hit->argmax, row.argmax);
  EXPECT_TRUE(hit->degenerate);
  EXPECT_FALSE(cache.load({7, 4}, 0.1, XySign::kPlus));
  EXPECT_FALSE(cache.load({7, 4}, 0.2, XySign::kMinus));
  std::filesystem::remove_all(dir);
}
