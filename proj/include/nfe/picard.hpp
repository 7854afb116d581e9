#ifndef NFE_PICARD_HPP
#define NFE_PICARD_HPP

#include <stdexcept>
#include <vector>

#include "nfe/collocation.hpp"
#include "nfe/problem.hpp"

namespace nfe {

enum class PicardMode { ExactRecursive, Grid };
enum class InitialGuess { Zero, Source };

struct PicardConfig {
  PicardMode mode = PicardMode::ExactRecursive;
  int depth = 10;       // K
  int grid_size = 1024; // m, grid mode only
  InitialGuess initial_guess = InitialGuess::Zero;
};

inline constexpr int kMaxRecursiveDepth = 30;

class PicardDepthError : public std::invalid_argument {
 public:
  explicit PicardDepthError(int depth);
};

/// u_K(x) by direct recursion u_k(x) = T u_{k-1}(x) + f(x); 2^K evaluations.
/// The problem must be homogeneous.
double picard_eval(const Problem& p, const PicardConfig& cfg, double x);

struct PicardGridResult {
  PiecewiseLinear<double> solution;
  std::vector<double> updates;  // sup |v_k - v_{k-1}| over nodes, k = 1..K
  double final_update() const { return updates.empty() ? 0.0 : updates.back(); }
};

/// v_{k+1} = P_h(T v_k + f) on an m-cell grid, K times.
PicardGridResult picard_grid(const Problem& p, const PicardConfig& cfg);

}  // namespace nfe

#endif  // NFE_PICARD_HPP
