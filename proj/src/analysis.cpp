#include "nfe/analysis.hpp"

#include <chrono>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "nfe/picard.hpp"

namespace nfe {

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point start) {
  return std::chrono::duration<double>(clock_type::now() - start).count();
}

double to_seconds(std::chrono::nanoseconds d) {
  return std::chrono::duration<double>(d).count();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t k = v.size() / 2;
  return v.size() % 2 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

template <typename F, typename G>
double distance(const F& a, const G& b, Norm norm, int points) {
  const ErrorMetrics m = compare(a, b, points);
  return norm == Norm::Sup ? m.sup_error : m.rms_error;
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

ConvergenceTable estimate_order(const Problem& p, int base_n, int levels,
                                const OrderOptions& options) {
  if (!is_power_of_two(base_n))
    throw std::invalid_argument(fmt::format("base_n = {} is not a power of two", base_n));
  if (levels < 3) throw std::invalid_argument("estimate_order: need at least three levels");
  if (options.eval_points < 2) throw std::invalid_argument("estimate_order: eval_points < 2");

  ConvergenceTable table;
  table.base_n = base_n;
  table.norm = options.norm;
  table.eval_points = options.eval_points;
  table.mode = options.exact ? OrderMode::ExactReference : OrderMode::Extrapolation;

  const Problem q = homogenize(p);
  std::vector<PiecewiseLinear<double>> solutions;
  for (int j = 0; j < levels; ++j) {
    const int n = base_n << j;
    try {
      solutions.push_back(solve(assemble(q, Grid<double>(n))).solution);
    } catch (const SingularSystem& e) {
      table.failure = e.what();
      break;
    }
  }

  const int solved = static_cast<int>(solutions.size());
  for (int j = 0; j < solved; ++j) {
    ConvergenceRow row;
    row.n = base_n << j;
    row.h = 1.0 / row.n;
    if (j + 1 < solved)
      row.difference =
          distance(solutions[j], solutions[j + 1], options.norm, options.eval_points);
    if (options.exact)
      row.error = distance(solutions[j], *options.exact, options.norm, options.eval_points);
    table.rows.push_back(row);
  }

  auto log_ratio = [](const std::optional<double>& coarse,
                      const std::optional<double>& fine) -> std::optional<double> {
    if (!coarse || !fine || *coarse < kOrderGuard || *fine < kOrderGuard)
      return std::nullopt;
    return std::log2(*coarse / *fine);
  };
  for (int j = 0; j < solved; ++j) {
    auto& row = table.rows[j];
    if (row.difference && *row.difference < kOrderGuard) row.exact_to_tolerance = true;
    if (j + 1 < solved) {
      const auto& next = table.rows[j + 1];
      if (next.difference && *next.difference < kOrderGuard) row.exact_to_tolerance = true;
      row.order = log_ratio(row.difference, next.difference);
      row.error_order = log_ratio(row.error, next.error);
    }
  }
  return table;
}

LogLogFit fit_loglog(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("fit_loglog: size mismatch");
  if (xs.size() < 2) throw std::invalid_argument("fit_loglog: need at least two points");
  const auto count = static_cast<Eigen::Index>(xs.size());
  Eigen::MatrixXd design(count, 2);
  Eigen::VectorXd target(count);
  for (Eigen::Index i = 0; i < count; ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0))
      throw std::invalid_argument("fit_loglog: inputs must be positive");
    design(i, 0) = 1.0;
    design(i, 1) = std::log(xs[i]);
    target[i] = std::log(ys[i]);
  }
  const Eigen::Vector2d beta = design.colPivHouseholderQr().solve(target);
  return LogLogFit{beta[1], std::exp(beta[0])};
}

BenchmarkTable benchmark(const Problem& p, std::span<const int> n_values, int repetitions,
                         const std::optional<RealFunction>& exact) {
  if (repetitions < 1) throw std::invalid_argument("benchmark: repetitions < 1");
  if (!std::is_sorted(n_values.begin(), n_values.end()))
    throw std::invalid_argument("benchmark: n_values must be ascending");

  const Problem q = homogenize(p);
  BenchmarkTable table;
  for (int n : n_values) {
    (void)solve(q, n);  // warm-up
    std::vector<double> assembly, solving, total;
    SolveReport last;
    for (int r = 0; r < repetitions; ++r) {
      last = solve(q, n);
      assembly.push_back(to_seconds(last.assembly_time));
      solving.push_back(to_seconds(last.solve_time));
      total.push_back(assembly.back() + solving.back());
    }
    BenchmarkRow row;
    row.n = n;
    row.assembly_seconds = median(assembly);
    row.solve_seconds = median(solving);
    row.total_seconds = median(total);
    row.error_proxy = exact ? compare(last.solution, *exact, kErrorProxyPoints).rms_error
                            : last.residual_max;
    table.rows.push_back(row);
  }

  if (table.rows.size() >= 2) {
    const std::size_t count = std::max<std::size_t>(2, (table.rows.size() + 1) / 2);
    std::vector<double> xs, ys;
    for (std::size_t i = table.rows.size() - count; i < table.rows.size(); ++i) {
      xs.push_back(table.rows[i].n);
      ys.push_back(table.rows[i].total_seconds);
    }
    table.fit = fit_loglog(xs, ys);
  }
  return table;
}

namespace {

struct PicardSample {
  double seconds;
  double rms;
};

PicardSample time_picard(const Problem& q, const RealFunction& reference, int depth,
                         int points, int repetitions) {
  PicardConfig cfg;
  cfg.depth = depth;
  std::vector<double> times;
  std::vector<double> values(points);
  for (int r = 0; r < repetitions; ++r) {
    const auto start = clock_type::now();
    for (int i = 0; i < points; ++i) values[i] = picard_eval(q, cfg, sample_point(i, points));
    times.push_back(seconds_since(start));
  }
  double sum_sq = 0.0;
  for (int i = 0; i < points; ++i) {
    const double d = values[i] - reference(sample_point(i, points));
    sum_sq += d * d;
  }
  return {median(times), std::sqrt(sum_sq / points)};
}

}  // namespace

std::vector<PicardCostRow> picard_cost(const Problem& p, const RealFunction& reference,
                                       int max_depth, int points, int repetitions) {
  if (max_depth < 1 || max_depth > kMaxRecursiveDepth) throw PicardDepthError(max_depth);
  if (points < 2) throw std::invalid_argument("picard_cost: need at least two points");
  const Problem q = homogenize(p);
  std::vector<PicardCostRow> rows;
  for (int k = 1; k <= max_depth; ++k) {
    const PicardSample s = time_picard(q, reference, k, points, repetitions);
    rows.push_back({k, s.seconds, s.rms});
  }
  return rows;
}

AccuracyRace race_to_rms(const Problem& p, const RealFunction& exact, double target,
                         int points, int repetitions) {
  const Problem q = homogenize(p);
  AccuracyRace race;
  race.target = target;

  for (int n = 4; n <= 4096; n *= 2) {
    (void)solve(q, n);
    std::vector<double> times;
    SolveReport report;
    for (int r = 0; r < repetitions; ++r) {
      const auto start = clock_type::now();
      report = solve(q, n);
      std::vector<double> values(points);
      for (int i = 0; i < points; ++i) values[i] = report.solution(sample_point(i, points));
      times.push_back(seconds_since(start));
    }
    race.n = n;
    race.collocation_seconds = median(times);
    race.collocation_rms = compare(report.solution, exact, points).rms_error;
    if (race.collocation_rms <= target) break;
  }

  for (int k = 1; k <= kMaxRecursiveDepth; ++k) {
    const PicardSample s = time_picard(q, exact, k, points, k < 12 ? repetitions : 1);
    race.picard_seconds = s.seconds;
    race.picard_rms = s.rms;
    if (s.rms <= target) {
      race.depth = k;
      break;
    }
  }
  return race;
}

ContractionCheck check_contraction(const Problem& p, int trials, int cells,
                                   unsigned seed, int samples) {
  if (trials < 1 || cells < 2 || samples < 2)
    throw std::invalid_argument("check_contraction: bad sizes");
  const Problem q = homogenize(p);
  ContractionCheck check;
  check.trials = trials;
  check.bound_factor = contraction_factor(q);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const Grid<double> g(cells);
  for (int t = 0; t < trials; ++t) {
    Eigen::VectorXd nodal(cells + 1);
    nodal[0] = 0.0;
    nodal[cells] = 0.0;
    for (int i = 1; i < cells; ++i) nodal[i] = dist(rng);
    const auto v = PiecewiseLinear<double>::from_nodal(g, nodal);
    const double norm_v = v.lipschitz();
    if (norm_v == 0.0) continue;
    const RealFunction vf = [&v](double x) { return v(x); };
    const double norm_tv =
        seminorm_estimate([&](double x) { return apply_T(q, vf, x); }, samples);
    check.worst_ratio = std::max(check.worst_ratio, norm_tv / norm_v);
    check.worst_excess = std::max(check.worst_excess, norm_tv - check.bound_factor * norm_v);
  }
  return check;
}

std::vector<OrderSweepCell> fish_order_sweep(int base_n, int levels,
                                             const OrderOptions& options) {
  std::vector<OrderSweepCell> cells;
  for (int a = 1; a <= 8; ++a) {
    for (int b = a + 1; b <= 9; ++b) {
      OrderSweepCell cell;
      cell.alpha = a / 10.0;
      cell.beta = b / 10.0;
      try {
        const ConvergenceTable t =
            estimate_order(fish(cell.alpha, cell.beta).problem, base_n, levels, options);
        cell.order = t.leading_order();
        if (t.failure) cell.failure = t.failure;
      } catch (const std::exception& e) {
        cell.failure = e.what();
      }
      cells.push_back(cell);
    }
  }
  return cells;
}

}  // namespace nfe
