#include "nfe/collocation.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace nfe {

OutOfDomainError::OutOfDomainError(double t)
    : std::domain_error(fmt::format("argument {:.17g} lies outside [0, 1]", t)),
      t_(t) {}

SingularSystem::SingularSystem(int n, int pivot_index, double pivot)
    : std::runtime_error(fmt::format(
          "collocation system with n = {} is singular: pivot {} has magnitude {:.3g}",
          n, pivot_index, pivot)),
      n_(n),
      pivot_(pivot) {}

int CollocationSystem::count(RowKind kind) const {
  return static_cast<int>(std::count(row_labels.begin(), row_labels.end(), kind));
}

namespace {

// Column offsets of a_i and b_i for interval i.
constexpr int col_a(int i) { return 2 * (i - 1); }
constexpr int col_b(int i) { return 2 * (i - 1) + 1; }

}  // namespace

CollocationSystem assemble(const Problem& p, const Grid<double>& g) {
  if (!p.homogeneous())
    throw std::invalid_argument("assemble: problem must be homogenized first");
  const int n = g.n;
  const int dim = 2 * n;

  CollocationSystem sys;
  sys.grid = g;
  sys.problem = p;
  sys.matrix = Eigen::MatrixXd::Zero(dim, dim);
  sys.rhs = Eigen::VectorXd::Zero(dim);
  sys.row_labels.reserve(dim);
  auto& A = sys.matrix;

  int row = 0;
  // u_h(0) = b_1 = 0
  A(row, col_b(1)) = 1.0;
  sys.row_labels.push_back(RowKind::Boundary);
  ++row;

  for (int i = 1; i < n; ++i, ++row) {
    const double xi = g.node(i);
    A(row, col_a(i)) = xi;
    A(row, col_b(i)) = 1.0;
    A(row, col_a(i + 1)) = -xi;
    A(row, col_b(i + 1)) = -1.0;
    sys.row_labels.push_back(RowKind::Continuity);
  }

  for (int i = 1; i < n; ++i, ++row) {
    const double xi = g.node(i);
    const double w = p.phi(xi);
    const double t1 = p.phi1(xi);
    const double t2 = p.phi2(xi);
    const int j = g.locate(t1);
    const int k = g.locate(t2);
    A(row, col_a(i)) += xi;
    A(row, col_b(i)) += 1.0;
    A(row, col_a(j)) -= w * t1;
    A(row, col_b(j)) -= w;
    A(row, col_a(k)) -= (1.0 - w) * t2;
    A(row, col_b(k)) -= (1.0 - w);
    sys.rhs[row] = p.f(xi);
    sys.row_labels.push_back(RowKind::Collocation);
  }

  // u_h(1) = a_n + b_n = 0
  A(row, col_a(n)) = 1.0;
  A(row, col_b(n)) = 1.0;
  sys.row_labels.push_back(RowKind::Boundary);
  return sys;
}

Residuals residuals(const Problem& p, const PiecewiseLinear<double>& u) {
  const auto& g = u.grid();
  Residuals r;
  r.boundary = std::max(std::abs(u.piece(1, 0.0)), std::abs(u.piece(g.n, 1.0)));
  for (int i = 1; i < g.n; ++i) {
    const double xi = g.node(i);
    r.continuity = std::max(r.continuity, std::abs(u.piece(i, xi) - u.piece(i + 1, xi)));
    const double w = p.phi(xi);
    const double tu = w * u(p.phi1(xi)) + (1.0 - w) * u(p.phi2(xi));
    r.collocation = std::max(r.collocation, std::abs(u.piece(i, xi) - tu - p.f(xi)));
  }
  return r;
}

SolveReport solve(const CollocationSystem& sys) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(sys.matrix);
  const Eigen::VectorXd pivots = lu.matrixLU().diagonal().cwiseAbs();
  Eigen::Index where = 0;
  const double min_pivot = pivots.minCoeff(&where);
  if (!(min_pivot >= kSingularPivot))
    throw SingularSystem(sys.grid.n, static_cast<int>(where), min_pivot);
  const Eigen::VectorXd z = lu.solve(sys.rhs);

  SolveReport report;
  report.solve_time =
      std::chrono::duration_cast<std::chrono::nanoseconds>(clock::now() - start);
  report.min_pivot = min_pivot;
  report.max_pivot = pivots.maxCoeff();
  const double scale = sys.matrix.cwiseAbs().maxCoeff();
  report.condition_warning = min_pivot < kConditionWarningRatio * scale;

  PiecewiseLinear<double>::Coeffs coeffs(sys.grid.n, 2);
  for (int i = 1; i <= sys.grid.n; ++i) {
    coeffs(i - 1, 0) = z[col_a(i)];
    coeffs(i - 1, 1) = z[col_b(i)];
  }
  report.solution = PiecewiseLinear<double>(sys.grid, std::move(coeffs));

  const Residuals r = residuals(sys.problem, report.solution);
  report.residual_max = r.collocation;
  report.continuity_residual = r.continuity;
  report.boundary_residual = r.boundary;
  return report;
}

SolveReport solve(const Problem& p, int n) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  CollocationSystem sys = assemble(homogenize(p), Grid<double>(n));
  const auto assembled = clock::now();
  SolveReport report = solve(sys);
  report.assembly_time =
      std::chrono::duration_cast<std::chrono::nanoseconds>(assembled - start);
  return report;
}

}  // namespace nfe
