#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "nfe/cli.hpp"
#include "nfe/io.hpp"

namespace nfe {
namespace {

const std::string kData = NFE_TEST_DATA_DIR;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "nfe");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

TEST(Cli, SolveWritesNodeTable) {
  const Result r = run_cli({"solve", "--model", "fish", "--param", "alpha=0.1", "--param",
                            "beta=0.2", "--n", "100"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 102u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"x", "u_h", "v_h"}));
  EXPECT_EQ(rows[1][0], "0");
  EXPECT_EQ(rows[101][0], "1");
}

TEST(Cli, GoldenCsvForEqualParameters) {
  const Result r = run_cli({"solve", "--model", "fish", "--param", "alpha=0.3", "--param",
                            "beta=0.3", "--n", "4"});
  ASSERT_EQ(r.code, cli::kOk);
  EXPECT_EQ(r.out, read_file(kData + "/fish_equal_n4.csv"));
}

TEST(Cli, ZeroSourceFileGivesZeros) {
  const Result r = run_cli({"solve", "--file", kData + "/zero_source.json", "--n", "16"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 18u);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(rows[i][1], "0");
}

TEST(Cli, CsvRoundTripIsBitExact) {
  const Result r = run_cli({"solve", "--model", "smooth", "--n", "37"});
  ASSERT_EQ(r.code, cli::kOk);
  const Model m = manufactured_smooth(0.3);
  const auto u = solve(m.problem, 37).solution;
  const auto rows = parse_csv(r.out);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double x = std::stod(rows[i][0]);
    EXPECT_EQ(x, Grid<>(37).node(static_cast<int>(i - 1)));
    EXPECT_EQ(std::stod(rows[i][1]), u(x));
  }
}

TEST(Cli, JsonIsDeterministicApartFromTimings) {
  const std::vector<std::string> args{"solve", "--model", "smooth", "--n", "32", "--format",
                                      "json"};
  auto a = nlohmann::json::parse(run_cli(args).out);
  auto b = nlohmann::json::parse(run_cli(args).out);
  ASSERT_TRUE(a.contains("timings"));
  a.erase("timings");
  b.erase("timings");
  EXPECT_EQ(a, b);
  EXPECT_EQ(a["tool"], "nfe");
  EXPECT_EQ(a["configuration"]["n"], 32);
  EXPECT_TRUE(a.contains("error_metrics"));
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cli({"solve", "--file", kData + "/violating.json", "--strict"}).code,
            cli::kAssumptionViolation);
  const Result lax = run_cli({"solve", "--file", kData + "/violating.json"});
  EXPECT_EQ(lax.code, cli::kOk);
  EXPECT_NE(lax.err.find("phi(0) = 0"), std::string::npos);
  EXPECT_EQ(run_cli({"validate", "--file", kData + "/violating.json", "--strict"}).code,
            cli::kAssumptionViolation);

  EXPECT_EQ(run_cli({"solve", "--file", kData + "/singular.json", "--n", "8"}).code,
            cli::kSingularSystem);
  EXPECT_EQ(run_cli({"order", "--file", kData + "/singular.json", "--base-n", "8"}).code,
            cli::kSingularSystem);

  EXPECT_EQ(run_cli({"solve", "--file", kData + "/malformed.json"}).code, cli::kInputError);
  EXPECT_EQ(run_cli({"solve", "--file", kData + "/nope.json"}).code, cli::kInputError);
  EXPECT_EQ(run_cli({"solve", "--model", "trout"}).code, cli::kInputError);
  EXPECT_EQ(run_cli({"solve", "--param", "alpha"}).code, cli::kInputError);
  EXPECT_EQ(run_cli({"solve", "--param", "alpha=abc"}).code, cli::kInputError);
  EXPECT_EQ(run_cli({"solve", "--model", "fish", "--param", "alpha=0.9"}).code,
            cli::kInputError);
  EXPECT_EQ(run_cli({"solve", "--model", "fish", "--file", "x.json"}).code, cli::kInputError);
  EXPECT_EQ(run_cli({"solve", "--format", "xml"}).code, cli::kInputError);
  EXPECT_EQ(run_cli({"frobnicate"}).code, cli::kInputError);
  EXPECT_EQ(run_cli({}).code, cli::kInputError);
  EXPECT_EQ(run_cli({"order", "--base-n", "100"}).code, cli::kInputError);
  EXPECT_EQ(run_cli({"--help"}).code, cli::kOk);
}

TEST(Cli, OutFile) {
  const auto path = std::filesystem::temp_directory_path() / "nfe_cli_test.csv";
  const Result r = run_cli({"solve", "--n", "4", "--out", path.string()});
  ASSERT_EQ(r.code, cli::kOk);
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(parse_csv(read_file(path.string())).size(), 6u);
  std::filesystem::remove(path);
}

TEST(Cli, OrderAndBench) {
  const Result o = run_cli({"order", "--model", "smooth", "--base-n", "16", "--levels", "3"});
  ASSERT_EQ(o.code, cli::kOk) << o.err;
  const auto rows = parse_csv(o.out);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0][3], "order");
  EXPECT_NEAR(std::stod(rows[1][3]), 2.0, 0.3);

  const Result b = run_cli({"bench", "--model", "fish", "--n", "16,32", "--repetitions", "1",
                            "--include-picard", "--picard-depth", "4", "--picard-points", "4"});
  ASSERT_EQ(b.code, cli::kOk) << b.err;
  const auto brows = parse_csv(b.out);
  ASSERT_EQ(brows.size(), 1u + 2u + 4u + 1u);
  EXPECT_EQ(brows[3][0], "picard");
}

TEST(Cli, Validate) {
  const Result r = run_cli({"validate", "--model", "fish", "--format", "json",
                            "--contraction-trials", "10", "--seed", "4"});
  ASSERT_EQ(r.code, cli::kOk);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_DOUBLE_EQ(j["validation"]["contraction_margin"].get<double>(), 0.4);
  EXPECT_TRUE(j["contraction_check"]["passed"].get<bool>());

  const Result warn = run_cli({"validate", "--model", "fish", "--param", "alpha=0.4",
                               "--param", "beta=0.9"});
  EXPECT_EQ(warn.code, cli::kOk);
  EXPECT_NE(warn.err.find("contraction margin"), std::string::npos);
}

}  // namespace
}  // namespace nfe
