#ifndef NFE_PROBLEM_HPP
#define NFE_PROBLEM_HPP

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace nfe {

using RealFunction = std::function<double(double)>;

/// A coefficient function on [0,1] with an optional analytic Lipschitz
/// seminorm supplied by whoever defined it.
struct Coefficient {
  RealFunction fn;
  std::optional<double> seminorm;
  std::string description;

  Coefficient() = default;
  Coefficient(RealFunction f, std::optional<double> lipschitz = std::nullopt,
              std::string desc = {})
      : fn(std::move(f)), seminorm(lipschitz), description(std::move(desc)) {}

  double operator()(double x) const { return fn(x); }
};

/// One instance of u(x) = phi(x) u(phi1(x)) + (1 - phi(x)) u(phi2(x)) + f(x)
/// on [0,1] with u(0) = u0, u(1) = u1.
///
/// `lift0`/`lift1` record a line already subtracted from the unknown: the
/// solution of the original problem is u(x) + (1 - x) lift0 + x lift1.
struct Problem {
  Coefficient phi;
  Coefficient phi1;
  Coefficient phi2;
  Coefficient f;
  double u0 = 0.0;
  double u1 = 0.0;
  std::string name;
  double lift0 = 0.0;
  double lift1 = 0.0;

  bool homogeneous() const { return u0 == 0.0 && u1 == 0.0; }
  double lift(double x) const { return (1.0 - x) * lift0 + x * lift1; }
};

struct AssumptionViolation {
  std::string condition;
  double x;
  double value;
};

struct Seminorm {
  double value = 0.0;
  bool analytic = false;
  double numeric = 0.0;  // divided-difference estimate, always computed
};

struct ValidationReport {
  std::vector<AssumptionViolation> assumption_violations;
  Seminorm phi, phi1, phi2, f;
  double contraction_factor = 0.0;  // (1 + |phi|)(|phi1| + |phi2|)
  double contraction_margin = 0.0;  // 1 - contraction_factor
  std::optional<double> apriori_bound;

  bool ok() const { return assumption_violations.empty(); }
  bool contractive() const { return contraction_margin > 0.0; }
};

inline constexpr int kSeminormSamples = 4096;
inline constexpr double kAssumptionTolerance = 1e-12;

/// Largest divided difference over `samples` uniform points of [0,1].
double seminorm_estimate(const RealFunction& c, int samples);

/// Analytic seminorm when the coefficient carries one, otherwise the estimate.
Seminorm seminorm(const Coefficient& c, int samples = kSeminormSamples);

ValidationReport validate(const Problem& p, int samples);

Problem homogenize(const Problem& p);

double apply_T(const Problem& p, const RealFunction& v, double x);

/// (1 + |phi|)(|phi1| + |phi2|) from analytic or estimated seminorms.
double contraction_factor(const Problem& p);

}  // namespace nfe

#endif  // NFE_PROBLEM_HPP
