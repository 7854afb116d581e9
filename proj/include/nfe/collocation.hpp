#ifndef NFE_COLLOCATION_HPP
#define NFE_COLLOCATION_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nfe/problem.hpp"

namespace nfe {

class OutOfDomainError : public std::domain_error {
 public:
  explicit OutOfDomainError(double t);
  double value() const { return t_; }

 private:
  double t_;
};

/// Arguments within this distance of [0,1] are clamped onto it.
inline constexpr double kDomainSlack = 1e-12;

/// Uniform partition x_i = i/n of [0,1], 0 <= i <= n.
template <typename Scalar = double>
struct Grid {
  int n = 1;

  Grid() = default;
  explicit Grid(int cells) : n(cells) {
    if (cells < 1) throw std::invalid_argument("Grid: need at least one cell");
  }

  Scalar h() const { return Scalar(1) / Scalar(n); }
  Scalar node(int i) const {
    return i >= n ? Scalar(1) : Scalar(i) / Scalar(n);
  }
  int cells() const { return n; }

  /// Index i in [1, n] with node(i-1) <= t <= node(i). An interior node
  /// belongs to the interval on its left.
  int locate(Scalar t) const {
    if (!(t >= -kDomainSlack && t <= 1 + kDomainSlack))
      throw OutOfDomainError(static_cast<double>(t));
    if (t <= node(1)) return 1;
    if (t > node(n - 1)) return n;
    using std::ceil;
    int i = static_cast<int>(ceil(t * Scalar(n)));
    i = std::clamp(i, 1, n);
    while (i > 1 && t <= node(i - 1)) --i;
    while (i < n && t > node(i)) ++i;
    return i;
  }

  friend bool operator==(const Grid& a, const Grid& b) { return a.n == b.n; }
};

template <typename Scalar>
int locate(const Grid<Scalar>& g, Scalar t) {
  return g.locate(t);
}

/// Continuous piecewise-linear function a_i x + b_i on [x_{i-1}, x_i].
/// Row i-1 of `coeffs` holds (a_i, b_i).
template <typename Scalar = double>
class PiecewiseLinear {
 public:
  using Coeffs = Eigen::Matrix<Scalar, Eigen::Dynamic, 2>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  PiecewiseLinear() = default;
  PiecewiseLinear(Grid<Scalar> g, Coeffs c) : grid_(g), coeffs_(std::move(c)) {
    if (coeffs_.rows() != g.n)
      throw std::invalid_argument("PiecewiseLinear: coefficient count mismatch");
  }

  /// Line through consecutive nodal values on each cell.
  static PiecewiseLinear from_nodal(Grid<Scalar> g, const Vector& values) {
    if (values.size() != g.n + 1)
      throw std::invalid_argument("PiecewiseLinear: need n+1 nodal values");
    Coeffs c(g.n, 2);
    for (int i = 1; i <= g.n; ++i) {
      Scalar xl = g.node(i - 1), xr = g.node(i);
      Scalar slope = (values[i] - values[i - 1]) / (xr - xl);
      c(i - 1, 0) = slope;
      c(i - 1, 1) = values[i - 1] - slope * xl;
    }
    return PiecewiseLinear(g, std::move(c));
  }

  const Grid<Scalar>& grid() const { return grid_; }
  const Coeffs& coeffs() const { return coeffs_; }
  Scalar slope(int i) const { return coeffs_(i - 1, 0); }
  Scalar intercept(int i) const { return coeffs_(i - 1, 1); }

  /// Value of piece i at t (no domain lookup).
  Scalar piece(int i, Scalar t) const {
    return coeffs_(i - 1, 0) * t + coeffs_(i - 1, 1);
  }

  Scalar operator()(Scalar t) const {
    int i = grid_.locate(t);
    return piece(i, t);
  }

  /// u(x_i), taking x_i from the interval on its left (x_0 from interval 1).
  Vector nodal_values() const {
    Vector v(grid_.n + 1);
    v[0] = piece(1, Scalar(0));
    for (int i = 1; i <= grid_.n; ++i) v[i] = piece(i, grid_.node(i));
    return v;
  }

  /// Largest |a_i|, which is the Lipschitz seminorm of a continuous
  /// piecewise-linear function.
  Scalar lipschitz() const { return coeffs_.col(0).cwiseAbs().maxCoeff(); }

 private:
  Grid<Scalar> grid_;
  Coeffs coeffs_;
};

template <typename Scalar>
Scalar eval(const PiecewiseLinear<Scalar>& u, Scalar t) {
  return u(t);
}

/// Nodal interpolant P_h v.
template <typename Scalar, typename F>
PiecewiseLinear<Scalar> project(const Grid<Scalar>& g, const F& v) {
  typename PiecewiseLinear<Scalar>::Vector values(g.n + 1);
  for (int i = 0; i <= g.n; ++i) values[i] = v(g.node(i));
  return PiecewiseLinear<Scalar>::from_nodal(g, values);
}

enum class RowKind { Boundary, Continuity, Collocation };

/// Dense 2n x 2n system for z = (a_1, b_1, ..., a_n, b_n).
struct CollocationSystem {
  Grid<double> grid;
  Eigen::MatrixXd matrix;
  Eigen::VectorXd rhs;
  std::vector<RowKind> row_labels;
  Problem problem;

  int dimension() const { return static_cast<int>(rhs.size()); }
  int count(RowKind kind) const;
};

class SingularSystem : public std::runtime_error {
 public:
  SingularSystem(int n, int pivot_index, double pivot);
  int cells() const { return n_; }
  double pivot() const { return pivot_; }

 private:
  int n_;
  double pivot_;
};

struct SolveReport {
  PiecewiseLinear<double> solution;
  double residual_max = 0.0;          // collocation equations, by substitution
  double continuity_residual = 0.0;
  double boundary_residual = 0.0;
  std::chrono::nanoseconds assembly_time{0};
  std::chrono::nanoseconds solve_time{0};
  bool condition_warning = false;
  double min_pivot = 0.0;
  double max_pivot = 0.0;
};

inline constexpr double kSingularPivot = 1e-14;
inline constexpr double kConditionWarningRatio = 1e-10;

/// Requires a homogeneous problem (u0 = u1 = 0).
CollocationSystem assemble(const Problem& p, const Grid<double>& g);

/// Dense LU with partial pivoting. Throws SingularSystem when a pivot falls
/// below kSingularPivot in magnitude.
SolveReport solve(const CollocationSystem& sys);

/// Homogenizes if needed, assembles and solves, timing both phases.
SolveReport solve(const Problem& p, int n);

/// Residuals of the three row families, recomputed from the function values
/// rather than from the matrix.
struct Residuals {
  double collocation = 0.0;
  double continuity = 0.0;
  double boundary = 0.0;
};
Residuals residuals(const Problem& p, const PiecewiseLinear<double>& u);

}  // namespace nfe

#endif  // NFE_COLLOCATION_HPP
