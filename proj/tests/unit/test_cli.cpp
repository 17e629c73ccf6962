#include <gtest/gtest.h>

#include <clocale>
#include <sstream>

#include "locbounds/cli/commands.hpp"
#include "locbounds/fit.hpp"
#include "locbounds/parallel.hpp"

using namespace locbounds;
using namespace locbounds::cli;

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    rows.push_back(cells);
  }
  return rows;
}

RunConfig rc(std::string sub, json cfg = json::object()) {
  RunConfig r;
  r.subcommand = std::move(sub);
  r.config = std::move(cfg);
  return r;
}

int column(const std::vector<std::string>& header, const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return int(i);
  ADD_FAILURE() << "missing column " << name;
  return 0;
}

}  // namespace

TEST(Csv, ShortestRoundTripIndependentOfLocale) {
  for (double x : {0.1, 1.0 / 3.0, 1e-300, 123456789.125, -2.5}) EXPECT_EQ(std::stod(fmt_double(x)), x);
  EXPECT_EQ(fmt_double(0.5), "0.5");
  EXPECT_EQ(fmt_double(std::nan("")), "nan");
  std::setlocale(LC_NUMERIC, "de_DE.UTF-8");
  EXPECT_EQ(fmt_double(0.25), "0.25");
  std::setlocale(LC_NUMERIC, "C");
  CsvWriter w({"a", "b"});
  w.row_strings({"x,y", "q\""});
  EXPECT_EQ(w.str(), "a,b\n\"x,y\",\"q\"\"\"\n");
}

TEST(Parallel, ResultsIndependentOfThreadCount) {
  std::vector<double> a(100), b(100);
  parallel_for(100, [&](std::size_t i) { a[i] = std::sin(double(i)); }, 1);
  parallel_for(100, [&](std::size_t i) { b[i] = std::sin(double(i)); }, 4);
  EXPECT_EQ(a, b);
  EXPECT_THROW(parallel_for(10, [](std::size_t i) { if (i == 7) throw DomainError("x"); }, 3), DomainError);
}

TEST(Cli, ExponentsTwoBodyRowAndSinglePoint) {
  auto out = cmd_exponents(rc("exponents", {{"alpha", 5.0}, {"delta_over_v", 1.0}}));
  auto rows = parse_csv(out.text);
  ASSERT_EQ(rows.size(), 3u);  // header, power-law, power-law-two-body
  const auto& h = rows[0];
  EXPECT_EQ(rows[1][column(h, "interaction")], "power-law");
  EXPECT_NEAR(std::stod(rows[1][column(h, "ours_lppl")]), alpha1_conformal(5.0, GapModel(1, 1)).exponent, 0.0);
  EXPECT_EQ(rows[2][column(h, "interaction")], "power-law-two-body");
  EXPECT_EQ(std::stod(rows[2][column(h, "ours_lppl")]), 5.0);
  EXPECT_EQ(std::stod(rows[2][column(h, "ours_fse")]), 4.0);
  EXPECT_EQ(std::stod(rows[2][column(h, "qac")]), 3.0);

  auto one = parse_csv(cmd_exponents(rc("exponents", {{"alpha", 1.5}, {"delta_over_v", 2.0}})).text);
  EXPECT_EQ(one.size(), 2u);
  EXPECT_THROW(cmd_exponents(rc("exponents", {{"alpha", 1.0}})), DomainError);
  EXPECT_THROW(cmd_exponents(rc("exponents", {{"alpha", json::array()}})), DomainError);
}

TEST(Cli, ExponentialRowsFollowTheFormula) {
  auto rows = parse_csv(cmd_exponents(rc("exponents", {{"alpha", 3.0}, {"mu", {0.5, 2.0}}, {"delta_over_v", 1.0}})).text);
  const auto& h = rows[0];
  int seen = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i][0] != "exponential") continue;
    double mu = std::stod(rows[i][column(h, "param")]);
    double m1 = std::stod(rows[i][column(h, "ours_lppl")]);
    EXPECT_EQ(m1, mu1_exponential(mu, GapModel(1, 1)).exponent);
    EXPECT_EQ(std::stod(rows[i][column(h, "ours_fse")]), m1);
    ++seen;
  }
  EXPECT_EQ(seen, 2);
}

TEST(Cli, CurveConformalNeverAboveNonconformal) {
  auto text = cmd_curve(rc("curve", {{"alpha", 3.0}, {"r_min", 1.0}, {"r_max", 1e6}, {"points", 13}})).text;
  auto rows = parse_csv(text);
  const auto& h = rows[0];
  std::map<std::string, double> non;
  bool r1 = false;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    double lb = std::stod(rows[i][column(h, "log_bound")]);
    EXPECT_TRUE(std::isfinite(lb));
    if (std::stod(rows[i][column(h, "r")]) == 1.0) r1 = true;
    if (rows[i][0] == "nonconformal") non[rows[i][column(h, "r")]] = lb;
  }
  EXPECT_TRUE(r1);
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i][0] == "conformal") EXPECT_LE(std::stod(rows[i][column(h, "log_bound")]), non.at(rows[i][column(h, "r")]));
}

TEST(Cli, CurveSlopeMatchesExponent) {
  std::vector<double> r, lb;
  auto rows = parse_csv(
      cmd_curve(rc("curve", {{"alpha", 3.0}, {"delta", 1.0}, {"methods", {"conformal"}}, {"r_min", 1e2}, {"r_max", 1e6},
                             {"points", 21}}))
          .text);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    r.push_back(std::stod(rows[i][2]));
    lb.push_back(std::stod(rows[i][3]));
  }
  double a1 = alpha1_conformal(3.0, GapModel(1, 1)).exponent;
  EXPECT_NEAR(fit_polylog_slope(r, lb) / a1, 1.0, 0.02);
}

TEST(Cli, CorrelationAndFse) {
  auto rows = parse_csv(cmd_correlation(rc("correlation", {{"r", {10.0, 100.0}}})).text);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_GT(std::stod(rows[1][6]), std::stod(rows[2][6]));
  auto fse = parse_csv(cmd_fse(rc("fse", {{"alpha", 3.0}, {"alpha1", 1.5}, {"L", {8, 16}}})).text);
  ASSERT_EQ(fse.size(), 3u);
  EXPECT_EQ(std::stod(fse[1][column(fse[0], "alpha3")]), 1.5);
  EXPECT_EQ(std::stod(fse[1][column(fse[0], "exact")]), fse_bound_1d(8, 3.0, 1.5, {1.0}));
  EXPECT_THROW(cmd_fse(rc("fse", {{"geometry", "torus"}, {"D", 2}})), DomainError);
}

TEST(Cli, Determinism) {
  for (auto cfg : {rc("exponents"), rc("curve", {{"points", 7}}), rc("correlation", {{"points", 4}}), rc("fse")}) {
    auto a = dispatch(cfg).text, b = dispatch(cfg).text;
    EXPECT_EQ(a, b) << cfg.subcommand;
  }
  auto v = rc("verify", {{"instances", 2}, {"sizes", {5}}, {"split_block", {4}}, {"degenerate_instance", false}});
  v.seed = 99;
  EXPECT_EQ(dispatch(v).text, dispatch(v).text);
  EXPECT_THROW(dispatch(rc("plot")), DomainError);
}

TEST(Cli, VerifyReport) {
  auto v = rc("verify", {{"instances", 3}, {"sizes", {6}}, {"split_block", {5}}});
  auto out = cmd_verify(v);
  EXPECT_EQ(out.exit_code, 0) << out.text;
  auto j = json::parse(out.text);
  EXPECT_EQ(j["schema_version"], kReportSchemaVersion);
  EXPECT_EQ(j["summary"]["fail"], 0);
  for (const auto& c : j["checks"]) EXPECT_FALSE(c["anchor"].get<std::string>().empty());
}

TEST(Cli, VerifyGapClosureIsNotAFailure) {
  auto v = rc("verify", {{"instances", 2}, {"sizes", {6}}, {"family", "crossing"}, {"split_block", json::array()},
                         {"degenerate_instance", false}});
  auto out = cmd_verify(v);
  auto j = json::parse(out.text);
  EXPECT_EQ(out.exit_code, 0);
  EXPECT_GT(j["summary"]["assumption_violated"].get<int>(), 0);
  EXPECT_EQ(j["summary"]["fail"], 0);
}

TEST(Cli, VerifyUsageErrors) {
  EXPECT_THROW(cmd_verify(rc("verify", {{"lambda_grid", json::array()}})), DomainError);
  EXPECT_THROW(cmd_verify(rc("verify", {{"sizes", json::array()}})), DomainError);
  auto neg = rc("verify", {{"instances", 1}});
  neg.tolerance = -1.0;
  EXPECT_THROW(cmd_verify(neg), DomainError);
  auto big = rc("verify", {{"sizes", {12}}});
  EXPECT_THROW(cmd_verify(big), DomainError);
}
