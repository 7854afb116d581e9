#include <cmath>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "nfe/io.hpp"

namespace nfe {
namespace {

const std::string kDocs = NFE_DOCS_DIR;
const std::string kData = NFE_TEST_DATA_DIR;

TEST(Csv, QuotingRoundTrip) {
  const std::vector<std::string> fields{"plain", "with,comma", "with \"quote\"", "line\nbreak",
                                        "", "—"};
  EXPECT_EQ(csv_field("with,comma"), "\"with,comma\"");
  EXPECT_EQ(csv_field("with \"quote\""), "\"with \"\"quote\"\"\"");
  const std::string text = csv_row(fields) + csv_row({"a", "b"});
  const auto parsed = parse_csv(text);
  ASSERT_EQ(parsed.size(), 2u);
  EXPECT_EQ(parsed[0], fields);
  EXPECT_EQ(parsed[1], (std::vector<std::string>{"a", "b"}));
}

TEST(Csv, DoublesRoundTripExactly) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> d(-1e3, 1e3);
  for (int i = 0; i < 1000; ++i) {
    const double v = d(rng) * std::pow(10.0, (i % 40) - 20);
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
  EXPECT_EQ(format_double(-0.0), "0");
  EXPECT_EQ(format_double(0.25), "0.25");
}

TEST(ProblemFile, FishMatchesBuiltIn) {
  const ProblemSource file = load_problem_file(kDocs + "/problems/fish.json", {});
  const Model builtin = fish(0.1, 0.2);
  const Problem& a = file.model.problem;
  const Problem& b = builtin.problem;
  for (int k = 0; k <= 100; ++k) {
    const double x = k / 100.0;
    EXPECT_DOUBLE_EQ(a.phi(x), b.phi(x));
    EXPECT_DOUBLE_EQ(a.phi1(x), b.phi1(x));
    EXPECT_DOUBLE_EQ(a.phi2(x), b.phi2(x));
    EXPECT_DOUBLE_EQ(a.f(x), b.f(x));
  }
  EXPECT_EQ(a.phi1.seminorm, 0.1);
  EXPECT_NEAR(*a.f.seminorm, 0.1, 1e-16);
  const auto ua = solve(a, 64).solution.nodal_values();
  const auto ub = solve(b, 64).solution.nodal_values();
  EXPECT_LE((ua - ub).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(ProblemFile, OverridesWin) {
  const ProblemSource s = load_problem_file(kDocs + "/problems/fish.json", {{"beta", 0.5}});
  EXPECT_EQ(s.params.at("beta"), 0.5);
  EXPECT_EQ(s.model.problem.phi2(1.0), 0.5);
}

TEST(ProblemFile, SmoothExampleCarriesExactSolution) {
  const ProblemSource s = load_problem_file(kDocs + "/problems/smooth.json", {});
  ASSERT_TRUE(s.model.exact.has_value());
  const Model builtin = manufactured_smooth(0.2);
  for (int k = 0; k <= 20; ++k)
    EXPECT_NEAR(s.model.problem.f(k / 20.0), builtin.problem.f(k / 20.0), 1e-14);
}

std::string location_of(const std::string& text) {
  try {
    parse_problem_document(text, {}, "doc");
  } catch (const ProblemFileError& e) {
    return e.location();
  }
  return "<no error>";
}

TEST(ProblemFile, ErrorLocations) {
  EXPECT_EQ(location_of(R"({"phi": "x", "phi1": "x", "phi2": "x"})"), "doc: field 'f'");
  EXPECT_EQ(location_of(R"({"phi": "x", "phi1": "x(", "phi2": "x", "f": "0"})"),
            "doc: field 'phi1'");
  EXPECT_EQ(location_of(R"({"phi": "x", "phi1": "x", "phi2": "gamma*x", "f": "0"})"),
            "doc: field 'phi2'");
  EXPECT_EQ(location_of(R"({"phi": 1, "phi1": "x", "phi2": "x", "f": "0"})"),
            "doc: field 'phi'");
  EXPECT_EQ(
      location_of(R"({"phi": "x", "phi1": "x", "phi2": "x", "f": "0", "seminorms": {"g": 1}})"),
      "doc: seminorms.g");
  EXPECT_EQ(location_of(R"({"phi": "x", "phi1": "x", "phi2": "x", "f": "0", "u1": "one"})"),
            "doc: field 'u1'");
  EXPECT_EQ(location_of("[1, 2]"), "doc");
  EXPECT_EQ(location_of(R"({"phi": "x",)").rfind("doc: byte ", 0), 0u);
  EXPECT_THROW(load_problem_file(kData + "/missing.json", {}), ProblemFileError);
  EXPECT_THROW(load_problem_file(kData + "/malformed.json", {}), ProblemFileError);
}

TEST(SolutionTable, ColumnsAndLift) {
  const Model m = fish(0.3, 0.3);
  const SolveReport r = solve(m.problem, 4);
  const SolutionTable t = solution_table(r.solution, m.problem, std::nullopt);
  EXPECT_EQ(t.columns, (std::vector<std::string>{"x", "u_h", "v_h"}));
  ASSERT_EQ(t.rows.size(), 5u);
  EXPECT_EQ(t.rows[2][2], 0.5);

  const Model s = manufactured_smooth(0.2);
  const SolutionTable e = solution_table(solve(s.problem, 8).solution, s.problem, s.exact);
  EXPECT_EQ(e.columns, (std::vector<std::string>{"x", "u_h", "exact", "abs_error"}));
}

TEST(Table1, Layout) {
  std::vector<OrderSweepCell> cells;
  for (int a = 1; a <= 8; ++a)
    for (int b = a + 1; b <= 9; ++b) {
      OrderSweepCell c{a / 10.0, b / 10.0, 2.0 + a / 100.0, std::nullopt};
      if (a == 2 && b == 5) c.order.reset();
      cells.push_back(c);
    }
  const auto rows = parse_csv(table1_csv(cells));
  ASSERT_EQ(rows.size(), 9u);
  EXPECT_EQ(rows[0][0], "alpha/beta");
  EXPECT_EQ(rows[0][1], "0.2");
  EXPECT_EQ(rows[0][8], "0.9");
  EXPECT_EQ(rows[1][0], "0.1");
  EXPECT_EQ(rows[1][1], "2.01");
  EXPECT_EQ(rows[2][1], "--");
  EXPECT_EQ(rows[2][4], "—");
  EXPECT_EQ(rows[8][8], "2.08");
}

TEST(Json, ValidationReport) {
  const auto j = to_json(validate(fish(0.1, 0.2).problem, 100));
  EXPECT_TRUE(j["assumption_violations"].empty());
  EXPECT_EQ(j["seminorms"]["phi1"]["source"], "analytic");
  EXPECT_DOUBLE_EQ(j["contraction_margin"].get<double>(), 0.4);
  EXPECT_FALSE(j["contraction_warning"].get<bool>());
}

}  // namespace
}  // namespace nfe
