#include "nfe/problem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nfe {

double seminorm_estimate(const RealFunction& c, int samples) {
  if (samples < 2) throw std::invalid_argument("seminorm_estimate: samples < 2");
  const double last = samples - 1;
  double best = 0.0;
  double x_prev = 0.0;
  double c_prev = c(0.0);
  for (int j = 1; j < samples; ++j) {
    double x = j == samples - 1 ? 1.0 : j / last;
    double cx = c(x);
    best = std::max(best, std::abs(cx - c_prev) / (x - x_prev));
    x_prev = x;
    c_prev = cx;
  }
  return best;
}

Seminorm seminorm(const Coefficient& c, int samples) {
  Seminorm s;
  s.numeric = seminorm_estimate(c.fn, samples);
  s.analytic = c.seminorm.has_value();
  s.value = s.analytic ? *c.seminorm : s.numeric;
  return s;
}

double contraction_factor(const Problem& p) {
  return (1.0 + seminorm(p.phi).value) *
         (seminorm(p.phi1).value + seminorm(p.phi2).value);
}

ValidationReport validate(const Problem& p, int samples) {
  if (samples < 0) throw std::invalid_argument("validate: negative samples");
  ValidationReport report;
  auto& out = report.assumption_violations;
  constexpr double tol = kAssumptionTolerance;

  auto pin = [&](const char* what, const Coefficient& c, double x, double want) {
    double v = c(x);
    if (std::abs(v - want) > tol) out.push_back({what, x, v});
  };
  pin("phi(0) = 0", p.phi, 0.0, 0.0);
  pin("phi(1) = 1", p.phi, 1.0, 1.0);
  pin("phi1(1) = 1", p.phi1, 1.0, 1.0);
  pin("phi2(0) = 0", p.phi2, 0.0, 0.0);
  if (p.homogeneous()) {
    pin("f(0) = 0", p.f, 0.0, 0.0);
    pin("f(1) = 0", p.f, 1.0, 0.0);
  }

  // Range conditions keep only the worst offender per coefficient.
  auto range = [&](const char* what, const Coefficient& c) {
    double worst_excess = 0.0;
    std::optional<AssumptionViolation> worst;
    const int total = samples + 2;
    for (int j = 0; j < total; ++j) {
      double x = j == total - 1 ? 1.0 : static_cast<double>(j) / (total - 1);
      double v = c(x);
      double excess = std::max(-v, v - 1.0);
      if (!std::isfinite(v)) excess = INFINITY;
      if (excess > tol && excess > worst_excess) {
        worst_excess = excess;
        worst = AssumptionViolation{what, x, v};
      }
    }
    if (worst) out.push_back(*worst);
  };
  range("0 <= phi <= 1", p.phi);
  range("0 <= phi1 <= 1", p.phi1);
  range("0 <= phi2 <= 1", p.phi2);

  report.phi = seminorm(p.phi);
  report.phi1 = seminorm(p.phi1);
  report.phi2 = seminorm(p.phi2);
  report.f = seminorm(p.f);
  report.contraction_factor =
      (1.0 + report.phi.value) * (report.phi1.value + report.phi2.value);
  report.contraction_margin = 1.0 - report.contraction_factor;
  if (report.contraction_margin > 0.0)
    report.apriori_bound = report.f.value / report.contraction_margin;
  return report;
}

Problem homogenize(const Problem& p) {
  if (p.homogeneous()) return p;
  const double a = p.u0;
  const double b = p.u1;
  auto h = [a, b](double x) { return (1.0 - x) * a + x * b; };

  Problem q = p;
  q.f = Coefficient(
      [phi = p.phi, phi1 = p.phi1, phi2 = p.phi2, f = p.f, h](double x) {
        double w = phi(x);
        return f(x) + w * h(phi1(x)) + (1.0 - w) * h(phi2(x)) - h(x);
      },
      std::nullopt, "homogenized source");
  q.u0 = 0.0;
  q.u1 = 0.0;
  q.lift0 = p.lift0 + a;
  q.lift1 = p.lift1 + b;
  return q;
}

double apply_T(const Problem& p, const RealFunction& v, double x) {
  double w = p.phi(x);
  return w * v(p.phi1(x)) + (1.0 - w) * v(p.phi2(x));
}

}  // namespace nfe
