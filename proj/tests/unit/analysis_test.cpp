#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "nfe/analysis.hpp"
#include "nfe/models.hpp"

namespace nfe {
namespace {

TEST(Compare, Examples) {
  const auto zero = [](double) { return 0.0; };
  const auto one = [](double) { return 1.0; };
  const ErrorMetrics m = compare(one, zero, 11);
  EXPECT_EQ(m.sup_error, 1.0);
  EXPECT_EQ(m.rms_error, 1.0);
  EXPECT_EQ(m.lipschitz_error, 0.0);
  EXPECT_EQ(m.eval_points, 11);

  const auto x = [](double t) { return t; };
  const ErrorMetrics l = compare(x, zero, 3);
  EXPECT_EQ(l.sup_error, 1.0);
  EXPECT_NEAR(l.rms_error, std::sqrt((0.0 + 0.25 + 1.0) / 3.0), 1e-15);
  EXPECT_NEAR(l.lipschitz_error, 1.0, 1e-15);
  EXPECT_THROW(compare(x, zero, 1), std::invalid_argument);
}

TEST(Compare, SymmetricAndOrdered) {
  const auto a = [](double t) { return std::sin(5 * t); };
  const auto b = [](double t) { return t * t; };
  const ErrorMetrics ab = compare(a, b, 501);
  const ErrorMetrics ba = compare(b, a, 501);
  EXPECT_EQ(ab.sup_error, ba.sup_error);
  EXPECT_EQ(ab.rms_error, ba.rms_error);
  EXPECT_LE(ab.rms_error, ab.sup_error);
}

TEST(Compare, SecondOrderRatio) {
  const Model m = manufactured_smooth(0.2);
  const double e64 = compare(solve(m.problem, 64).solution, *m.exact, 2049).sup_error;
  const double e128 = compare(solve(m.problem, 128).solution, *m.exact, 2049).sup_error;
  EXPECT_NEAR(e64 / e128, 4.0, 0.6);
}

TEST(FitLogLog, Examples) {
  const std::vector<double> xs{1, 2, 4, 8};
  std::vector<double> ys;
  for (double x : xs) ys.push_back(3.0 * x * x);
  const LogLogFit f = fit_loglog(xs, ys);
  EXPECT_NEAR(f.exponent, 2.0, 1e-12);
  EXPECT_NEAR(f.prefactor, 3.0, 1e-11);

  const std::vector<double> flat{5, 5, 5, 5};
  EXPECT_NEAR(fit_loglog(xs, flat).exponent, 0.0, 1e-12);

  const std::vector<double> one{1};
  EXPECT_THROW(fit_loglog(one, one), std::invalid_argument);
  const std::vector<double> bad{1, -2};
  EXPECT_THROW(fit_loglog(bad, bad), std::invalid_argument);
  EXPECT_THROW(fit_loglog(xs, bad), std::invalid_argument);
}

TEST(EstimateOrder, ExactSolutionIsFlagged) {
  const ConvergenceTable t = estimate_order(fish(0.3, 0.3).problem, 8, 3);
  ASSERT_EQ(t.rows.size(), 3u);
  EXPECT_TRUE(t.rows[0].exact_to_tolerance);
  EXPECT_FALSE(t.leading_order().has_value());
  EXPECT_FALSE(t.failure.has_value());
}

TEST(EstimateOrder, SmoothIsSecondOrder) {
  const Model m = manufactured_smooth(0.2);
  OrderOptions opts;
  opts.exact = m.exact;
  const ConvergenceTable t = estimate_order(m.problem, 32, 4, opts);
  ASSERT_EQ(t.rows.size(), 4u);
  EXPECT_EQ(t.mode, OrderMode::ExactReference);
  for (int j = 0; j < 2; ++j) {
    ASSERT_TRUE(t.rows[j].order.has_value());
    ASSERT_TRUE(t.rows[j].error_order.has_value());
    EXPECT_NEAR(*t.rows[j].order, 2.0, 0.3);
    EXPECT_NEAR(*t.rows[j].error_order, 2.0, 0.3);
    EXPECT_LE(std::abs(*t.rows[j].order - *t.rows[j].error_order), 0.3);
  }
  EXPECT_FALSE(t.rows.back().difference.has_value());
  EXPECT_EQ(t.rows[1].n, 64);
  EXPECT_EQ(t.rows[1].h, 1.0 / 64);
}

TEST(EstimateOrder, CuspIsHalfOrder) {
  const Model m = manufactured_nonsmooth(0.45);
  OrderOptions opts;
  opts.exact = m.exact;
  const ConvergenceTable t = estimate_order(m.problem, 64, 3, opts);
  ASSERT_TRUE(t.rows[0].error_order.has_value());
  EXPECT_NEAR(*t.rows[0].error_order, 0.5, 0.15);
}

TEST(EstimateOrder, RejectsBadInput) {
  const Problem p = fish(0.1, 0.2).problem;
  EXPECT_THROW(estimate_order(p, 100, 3), std::invalid_argument);
  EXPECT_THROW(estimate_order(p, 64, 2), std::invalid_argument);
  OrderOptions opts;
  opts.eval_points = 1;
  EXPECT_THROW(estimate_order(p, 64, 3, opts), std::invalid_argument);
}

TEST(EstimateOrder, SingularLevelKeepsPartialRows) {
  Problem p;
  p.phi = Coefficient([](double) { return 1.0; });
  p.phi1 = Coefficient([](double x) { return x; });
  p.phi2 = Coefficient([](double x) { return x; });
  p.f = Coefficient([](double) { return 0.0; });
  const ConvergenceTable t = estimate_order(p, 4, 3);
  EXPECT_TRUE(t.failure.has_value());
  EXPECT_TRUE(t.rows.empty());
}

TEST(Benchmark, SingleSizeHasNoFit) {
  const std::vector<int> ns{32};
  const BenchmarkTable t = benchmark(fish(0.1, 0.2).problem, ns, 2);
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_FALSE(t.fit.has_value());
  EXPECT_GT(t.rows[0].total_seconds, 0.0);
  EXPECT_LE(t.rows[0].error_proxy, 1e-9);
}

TEST(Benchmark, ErrorProxyUsesExactSolution) {
  const Model m = manufactured_smooth(0.2);
  const std::vector<int> ns{16, 32, 64};
  const BenchmarkTable t = benchmark(m.problem, ns, 1, m.exact);
  ASSERT_EQ(t.rows.size(), 3u);
  ASSERT_TRUE(t.fit.has_value());
  EXPECT_GT(t.rows[0].error_proxy, t.rows[2].error_proxy * 8);
  const std::vector<int> unsorted{64, 16};
  EXPECT_THROW(benchmark(m.problem, unsorted, 1), std::invalid_argument);
}

TEST(PicardCost, ErrorFallsWithDepth) {
  const Model m = manufactured_smooth(0.2);
  const auto rows = picard_cost(m.problem, *m.exact, 8, 16);
  ASSERT_EQ(rows.size(), 8u);
  EXPECT_LT(rows[7].rms_error, rows[0].rms_error * 1e-3);
  EXPECT_THROW(picard_cost(m.problem, *m.exact, 31, 16), std::invalid_argument);
}

TEST(ContractionCheck, DeterministicBySeed) {
  const Problem p = fish(0.1, 0.2).problem;
  const ContractionCheck a = check_contraction(p, 20, 16, 5);
  const ContractionCheck b = check_contraction(p, 20, 16, 5);
  EXPECT_EQ(a.worst_ratio, b.worst_ratio);
  EXPECT_NEAR(a.bound_factor, 0.6, 1e-15);
  EXPECT_TRUE(a.passed());
  EXPECT_THROW(check_contraction(p, 0, 16, 5), std::invalid_argument);
}

}  // namespace
}  // namespace nfe
