#include "nfe/picard.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace nfe {

PicardDepthError::PicardDepthError(int depth)
    : std::invalid_argument(fmt::format(
          "Picard depth {} outside [1, {}]", depth, kMaxRecursiveDepth)) {}

namespace {

double iterate(const Problem& p, InitialGuess guess, int k, double x) {
  if (k == 0) return guess == InitialGuess::Source ? p.f(x) : 0.0;
  const double w = p.phi(x);
  return w * iterate(p, guess, k - 1, p.phi1(x)) +
         (1.0 - w) * iterate(p, guess, k - 1, p.phi2(x)) + p.f(x);
}

void require_homogeneous(const Problem& p) {
  if (!p.homogeneous())
    throw std::invalid_argument("Picard iteration needs a homogenized problem");
}

}  // namespace

double picard_eval(const Problem& p, const PicardConfig& cfg, double x) {
  if (cfg.depth < 1 || cfg.depth > kMaxRecursiveDepth)
    throw PicardDepthError(cfg.depth);
  require_homogeneous(p);
  if (!(x >= 0.0 && x <= 1.0)) throw OutOfDomainError(x);
  return iterate(p, cfg.initial_guess, cfg.depth, x);
}

PicardGridResult picard_grid(const Problem& p, const PicardConfig& cfg) {
  if (cfg.depth < 1) throw PicardDepthError(cfg.depth);
  if (cfg.grid_size < 1) throw std::invalid_argument("picard_grid: m < 1");
  require_homogeneous(p);

  const Grid<double> g(cfg.grid_size);
  const int m = g.n;

  // Coefficient values at the nodes do not change between iterations.
  Eigen::VectorXd w(m + 1), t1(m + 1), t2(m + 1), f(m + 1);
  for (int i = 0; i <= m; ++i) {
    const double x = g.node(i);
    w[i] = p.phi(x);
    t1[i] = p.phi1(x);
    t2[i] = p.phi2(x);
    f[i] = p.f(x);
  }

  Eigen::VectorXd v = cfg.initial_guess == InitialGuess::Source
                          ? f
                          : Eigen::VectorXd::Zero(m + 1);
  PicardGridResult result;
  result.updates.reserve(cfg.depth);
  Eigen::VectorXd next(m + 1);
  for (int k = 0; k < cfg.depth; ++k) {
    const auto current = PiecewiseLinear<double>::from_nodal(g, v);
    for (int i = 0; i <= m; ++i)
      next[i] = w[i] * current(t1[i]) + (1.0 - w[i]) * current(t2[i]) + f[i];
    result.updates.push_back((next - v).cwiseAbs().maxCoeff());
    v.swap(next);
  }
  result.solution = PiecewiseLinear<double>::from_nodal(g, v);
  return result;
}

}  // namespace nfe
