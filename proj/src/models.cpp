#include "nfe/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

namespace nfe {

namespace {

// f := u - T u, so the residual identity holds by construction.
Coefficient manufactured_source(const Problem& p, const RealFunction& u) {
  return Coefficient(
      [phi = p.phi, phi1 = p.phi1, phi2 = p.phi2, u](double x) {
        const double w = phi(x);
        return u(x) - (w * u(phi1(x)) + (1.0 - w) * u(phi2(x)));
      },
      std::nullopt, "u - Tu");
}

void check_fish(double alpha, double beta) {
  if (!(alpha > 0.0 && alpha <= beta && beta < 1.0))
    throw ParameterDomainError(fmt::format(
        "fish needs 0 < alpha <= beta < 1 (got alpha = {}, beta = {})", alpha, beta));
}

double param(const std::map<std::string, double>& params, const std::string& name,
             double fallback) {
  auto it = params.find(name);
  return it == params.end() ? fallback : it->second;
}

}  // namespace

Model fish(double alpha, double beta) {
  check_fish(alpha, beta);
  Problem p;
  p.name = fmt::format("fish(alpha={}, beta={})", alpha, beta);
  p.phi = Coefficient([](double x) { return x; }, 1.0, "x");
  p.phi1 = Coefficient([alpha](double x) { return 1.0 - alpha + alpha * x; }, alpha,
                       "1 - alpha + alpha*x");
  p.phi2 = Coefficient([beta](double x) { return beta * x; }, beta, "beta*x");
  p.f = Coefficient([d = beta - alpha](double x) { return d * (1.0 - x) * x; },
                    std::abs(beta - alpha), "(beta - alpha)*(1 - x)*x");
  p.lift1 = 1.0;
  return Model{std::move(p), std::nullopt, true};
}

Model fish_raw(double alpha, double beta) {
  Model m = fish(alpha, beta);
  m.problem.name = fmt::format("fish-raw(alpha={}, beta={})", alpha, beta);
  m.problem.f = Coefficient([](double) { return 0.0; }, 0.0, "0");
  m.problem.u0 = 0.0;
  m.problem.u1 = 1.0;
  m.problem.lift1 = 0.0;
  return m;
}

Model manufactured_smooth(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0 / 3.0))
    throw ParameterDomainError(
        fmt::format("smooth model needs alpha in (0, 1/3) (got {})", alpha));
  Problem p;
  p.name = fmt::format("smooth(alpha={})", alpha);
  p.phi = Coefficient([](double x) { return x * x; }, 2.0, "x^2");
  p.phi1 = Coefficient([alpha](double x) { return 1.0 - 0.5 * alpha * (1.0 - x); },
                       0.5 * alpha, "1 - alpha/2*(1 - x)");
  p.phi2 = Coefficient([alpha](double x) { return 1.0 - std::exp(-0.5 * alpha * x); },
                       0.5 * alpha, "1 - exp(-alpha/2*x)");
  RealFunction exact = [](double x) { return std::sin(std::numbers::pi * x); };
  p.f = manufactured_source(p, exact);
  return Model{std::move(p), exact, true};
}

Model manufactured_nonsmooth(double alpha) {
  if (!(alpha > 0.0 && alpha < 0.5))
    throw ParameterDomainError(
        fmt::format("nonsmooth model needs alpha in (0, 1/2) (got {})", alpha));
  Problem p;
  p.name = fmt::format("nonsmooth(alpha={})", alpha);
  p.phi = Coefficient([](double x) { return x; }, 1.0, "x");
  p.phi1 = Coefficient([alpha](double x) { return 1.0 - 0.5 * alpha * (1.0 - x); },
                       0.5 * alpha, "1 - alpha/2*(1 - x)");
  p.phi2 = Coefficient([alpha](double x) { return 0.5 * alpha * x; }, 0.5 * alpha,
                       "alpha/2*x");
  RealFunction exact = [](double x) {
    return std::sqrt(std::max(0.0, 0.5 - std::abs(x - 0.5)));
  };
  p.f = manufactured_source(p, exact);
  return Model{std::move(p), exact, false};
}

const std::map<std::string, std::vector<std::string>>& model_parameters() {
  static const std::map<std::string, std::vector<std::string>> names = {
      {"fish", {"alpha", "beta"}},
      {"fish-raw", {"alpha", "beta"}},
      {"smooth", {"alpha"}},
      {"nonsmooth", {"alpha"}},
  };
  return names;
}

Model make_model(const std::string& name, const std::map<std::string, double>& params) {
  const auto& known = model_parameters();
  auto it = known.find(name);
  if (it == known.end()) throw std::invalid_argument(fmt::format("unknown model '{}'", name));
  for (const auto& [key, value] : params) {
    if (std::find(it->second.begin(), it->second.end(), key) == it->second.end())
      throw std::invalid_argument(
          fmt::format("model '{}' has no parameter '{}'", name, key));
  }
  if (name == "fish") return fish(param(params, "alpha", 0.1), param(params, "beta", 0.2));
  if (name == "fish-raw")
    return fish_raw(param(params, "alpha", 0.1), param(params, "beta", 0.2));
  if (name == "smooth") return manufactured_smooth(param(params, "alpha", 0.3));
  return manufactured_nonsmooth(param(params, "alpha", 0.45));
}

}  // namespace nfe
