#ifndef NFE_ANALYSIS_HPP
#define NFE_ANALYSIS_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "nfe/collocation.hpp"
#include "nfe/models.hpp"
#include "nfe/problem.hpp"

namespace nfe {

struct ErrorMetrics {
  double sup_error = 0.0;
  double rms_error = 0.0;
  double lipschitz_error = 0.0;  // sampled seminorm of the difference
  int eval_points = 0;
};

/// Uniform sample i/(points-1), i = 0..points-1, with exact endpoints.
inline double sample_point(int i, int points) {
  return i == points - 1 ? 1.0 : static_cast<double>(i) / (points - 1);
}

template <typename F, typename G>
ErrorMetrics compare(const F& a, const G& b, int points) {
  if (points < 2) throw std::invalid_argument("compare: need at least two points");
  ErrorMetrics m;
  m.eval_points = points;
  double sum_sq = 0.0;
  double prev_x = 0.0, prev_d = 0.0;
  for (int i = 0; i < points; ++i) {
    const double x = sample_point(i, points);
    const double d = a(x) - b(x);
    m.sup_error = std::max(m.sup_error, std::abs(d));
    sum_sq += d * d;
    if (i > 0)
      m.lipschitz_error = std::max(m.lipschitz_error, std::abs(d - prev_d) / (x - prev_x));
    prev_x = x;
    prev_d = d;
  }
  m.rms_error = std::sqrt(sum_sq / points);
  // Rounding in the mean can push rms a hair above sup for constant errors.
  m.rms_error = std::min(m.rms_error, m.sup_error);
  return m;
}

enum class Norm { Sup, Rms };
enum class OrderMode { Extrapolation, ExactReference };

inline constexpr int kDefaultOrderPoints = 2049;
inline constexpr double kOrderGuard = 1e-12;

struct ConvergenceRow {
  int n = 0;
  double h = 0.0;
  std::optional<double> difference;  // |u_n - u_2n|, absent on the last level
  std::optional<double> order;       // log2(d_j / d_{j+1})
  std::optional<double> error;       // |u_n - u| when the exact solution is known
  std::optional<double> error_order; // log2(e_j / e_{j+1})
  bool exact_to_tolerance = false;   // differences below kOrderGuard
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  int base_n = 0;
  OrderMode mode = OrderMode::Extrapolation;
  Norm norm = Norm::Sup;
  int eval_points = kDefaultOrderPoints;
  std::optional<std::string> failure;  // set when a level could not be solved

  /// Extrapolated order at the coarsest level, if it was computed.
  std::optional<double> leading_order() const {
    return rows.empty() ? std::nullopt : rows.front().order;
  }
};

struct OrderOptions {
  Norm norm = Norm::Sup;
  int eval_points = kDefaultOrderPoints;
  std::optional<RealFunction> exact;
};

/// Solves at n = base_n * 2^j for j < levels and estimates the convergence
/// order from successive differences. A singular level ends the ladder and
/// keeps the rows computed so far.
ConvergenceTable estimate_order(const Problem& p, int base_n, int levels,
                                const OrderOptions& options = {});

struct LogLogFit {
  double exponent = 0.0;
  double prefactor = 0.0;
};

/// Least-squares line log y = log c + e log x.
LogLogFit fit_loglog(std::span<const double> xs, std::span<const double> ys);

struct BenchmarkRow {
  int n = 0;
  double assembly_seconds = 0.0;
  double solve_seconds = 0.0;
  double total_seconds = 0.0;
  double error_proxy = 0.0;  // RMS error vs exact, else collocation residual
};

struct PicardCostRow {
  int depth = 0;
  double seconds = 0.0;
  double rms_error = 0.0;
};

struct BenchmarkTable {
  std::vector<BenchmarkRow> rows;
  std::optional<LogLogFit> fit;  // over the largest half of n_values
  std::vector<PicardCostRow> picard;
};

inline constexpr int kErrorProxyPoints = 1001;

/// Median-of-`repetitions` wall time per phase after one discarded warm-up.
BenchmarkTable benchmark(const Problem& p, std::span<const int> n_values, int repetitions,
                         const std::optional<RealFunction>& exact = std::nullopt);

/// Exact-recursive Picard cost and RMS error against `reference` at
/// `points` uniform points for K = 1..max_depth.
std::vector<PicardCostRow> picard_cost(const Problem& p, const RealFunction& reference,
                                       int max_depth, int points, int repetitions = 1);

/// Cheapest way each method reaches a target RMS error.
struct AccuracyRace {
  double target = 0.0;
  int n = 0;                 // collocation cells needed
  double collocation_seconds = 0.0;
  double collocation_rms = 0.0;
  std::optional<int> depth;  // Picard depth needed, absent if K cap hit
  double picard_seconds = 0.0;
  double picard_rms = 0.0;
};

AccuracyRace race_to_rms(const Problem& p, const RealFunction& exact, double target,
                         int points, int repetitions = 3);

struct OrderSweepCell {
  double alpha = 0.0;
  double beta = 0.0;
  std::optional<double> order;
  std::optional<std::string> failure;
};

/// Sampled check of |T v| <= (1 + |phi|)(|phi1| + |phi2|) |v| over random
/// piecewise-linear v with v(0) = v(1) = 0.
struct ContractionCheck {
  int trials = 0;
  double bound_factor = 0.0;  // (1 + |phi|)(|phi1| + |phi2|)
  double worst_ratio = 0.0;   // max over trials of |T v| / |v|
  double worst_excess = 0.0;  // max(0, |T v| - bound_factor |v|)
  bool passed(double tolerance = 1e-8) const { return worst_excess <= tolerance; }
};

ContractionCheck check_contraction(const Problem& p, int trials, int cells,
                                   unsigned seed, int samples = 4097);

/// Extrapolated orders of the fish model over the alpha < beta cells of
/// {0.1, ..., 0.9}. Failed cells hold no value.
std::vector<OrderSweepCell> fish_order_sweep(int base_n, int levels,
                                             const OrderOptions& options = {});

}  // namespace nfe

#endif  // NFE_ANALYSIS_HPP
