#ifndef NFE_MODELS_HPP
#define NFE_MODELS_HPP

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nfe/problem.hpp"

namespace nfe {

class ParameterDomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A catalog problem with its exact solution, when one is known.
struct Model {
  Problem problem;
  std::optional<RealFunction> exact;
  bool exact_lipschitz = true;  // false for the Hölder-1/2 cusp
};

/// Learning model with phi = x, phi1 = 1 - alpha + alpha x, phi2 = beta x,
/// stored after subtracting the line v = x (so lift1 = 1).
/// Requires 0 < alpha <= beta < 1.
Model fish(double alpha, double beta);

/// Same model before homogenization: v(0) = 0, v(1) = 1, f = 0.
Model fish_raw(double alpha, double beta);

/// phi = x^2, phi1 = 1 - (alpha/2)(1 - x), phi2 = 1 - exp(-alpha x / 2),
/// exact solution sin(pi x). Requires alpha in (0, 1/3).
Model manufactured_smooth(double alpha);

/// phi = x, phi1 = 1 - (alpha/2)(1 - x), phi2 = alpha x / 2,
/// exact solution sqrt(1/2 - |x - 1/2|). Requires alpha in (0, 1/2).
Model manufactured_nonsmooth(double alpha);

/// Names accepted by make_model together with their parameter names.
const std::map<std::string, std::vector<std::string>>& model_parameters();

/// Looks a model up by name ("fish", "fish-raw", "smooth", "nonsmooth").
/// Missing parameters fall back to defaults; unknown names throw.
Model make_model(const std::string& name, const std::map<std::string, double>& params);

}  // namespace nfe

#endif  // NFE_MODELS_HPP
