#include "vie/problem.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

#include "vie/error.hpp"
#include "vie/gauss_legendre.hpp"

namespace vie {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRegistrationTolerance = 1e-8;

constexpr std::array<std::string_view, 3> kBuiltinNames{"sin-kernel", "exp-kernel", "poly-manufactured"};

const gl::QuadratureRule& oracle_rule() {
  static const gl::QuadratureRule rule = gl::compute_rule(50);
  return rule;
}

void spot_check(const std::string& name, double horizon, const KernelFn& kernel, const ScalarFn& source,
                const std::optional<ScalarFn>& exact) {
  constexpr int kGrid = 32;
  for (int a = 0; a <= kGrid; ++a) {
    const double t = horizon * a / kGrid;
    const bool ok_t = std::isfinite(source(t)) && (!exact || std::isfinite((*exact)(t)));
    if (!ok_t) {
      std::ostringstream msg;
      msg << name << ": non-finite source or exact solution at t=" << t;
      throw Error(ErrorKind::InvalidProblem, msg.str());
    }
    for (int b = 0; b <= a; ++b) {
      const double s = horizon * b / kGrid;
      if (!std::isfinite(kernel(t, s))) {
        std::ostringstream msg;
        msg << name << ": non-finite kernel at (t, s)=(" << t << ", " << s << ")";
        throw Error(ErrorKind::InvalidProblem, msg.str());
      }
    }
  }
}

}  // namespace

VolterraProblem::VolterraProblem(std::string name, double horizon, KernelFn kernel, ScalarFn source,
                                 std::optional<ScalarFn> exact)
    : name_(std::move(name)),
      horizon_(horizon),
      kernel_(std::move(kernel)),
      source_(std::move(source)),
      exact_(std::move(exact)) {}

VolterraProblem VolterraProblem::create(std::string name, double horizon, KernelFn kernel, ScalarFn source,
                                        std::optional<ScalarFn> exact) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw Error(ErrorKind::InvalidProblem, name + ": horizon must be positive and finite");
  }
  if (!kernel || !source || (exact && !*exact)) {
    throw Error(ErrorKind::InvalidProblem, name + ": kernel and source must be callable");
  }
  spot_check(name, horizon, kernel, source, exact);
  VolterraProblem problem(std::move(name), horizon, std::move(kernel), std::move(source), std::move(exact));
  if (problem.has_exact()) {
    const double residual = residual_check(problem, 20);
    if (!(residual <= kRegistrationTolerance)) {
      std::ostringstream msg;
      msg << problem.name() << ": exact solution fails the residual gate (" << residual << " > "
          << kRegistrationTolerance << ")";
      throw Error(ErrorKind::InvalidProblem, msg.str());
    }
  }
  return problem;
}

double VolterraProblem::exact(double t) const {
  if (!exact_) throw Error(ErrorKind::NotApplicable, name_ + " has no exact solution");
  return (*exact_)(t);
}

VolterraProblem VolterraProblem::with_horizon(double horizon) const {
  return create(name_, horizon, kernel_, source_, exact_);
}

VolterraProblem builtin(std::string_view name, double horizon) {
  if (name == "sin-kernel") {
    // u + \int sin(pi(t-s)) u ds = g, i.e. K = -sin(pi(t-s)) in canonical form.
    return VolterraProblem::create(
        std::string(name), horizon, [](double t, double s) { return -std::sin(kPi * (t - s)); },
        [](double t) { return (1.0 + 1.0 / (2.0 * kPi)) * std::sin(kPi * t) - 0.5 * t * std::cos(kPi * t); },
        [](double t) { return std::sin(kPi * t); });
  }
  if (name == "exp-kernel") {
    return VolterraProblem::create(
        std::string(name), horizon, [](double t, double s) { return (t - s) * std::exp(s - t); },
        [](double t) { return 1.0 - (1.0 + t) * std::exp(-t); },
        [](double t) { return 0.25 * (2.0 * t - 1.0 + std::exp(-2.0 * t)); });
  }
  if (name == "poly-manufactured") {
    return VolterraProblem::create(
        std::string(name), horizon, [](double, double) { return 1.0; }, [](double t) { return t - 0.5 * t * t; },
        [](double t) { return t; });
  }
  throw Error(ErrorKind::UnknownProblem, "unknown problem '" + std::string(name) + "'");
}

std::span<const std::string_view> builtin_names() noexcept { return kBuiltinNames; }

double residual_check(const VolterraProblem& problem, int t_samples) {
  if (!problem.has_exact()) throw Error(ErrorKind::NotApplicable, problem.name() + " has no exact solution");
  if (t_samples < 1) throw Error(ErrorKind::DomainError, "residual_check needs at least one sample");

  constexpr int kPanels = 32;
  const auto& rule = oracle_rule();
  double worst = 0.0;
  for (int i = 1; i <= t_samples; ++i) {
    const double t = problem.horizon() * i / t_samples;
    const double h = t / kPanels;
    double integral = 0.0;
    for (int p = 0; p < kPanels; ++p) {
      const double a = p * h;
      const double b = (p + 1 == kPanels) ? t : a + h;
      double panel = 0.0;
      for (std::size_t q = 0; q < rule.size(); ++q) {
        const double s = gl::map_point(rule.nodes()[q], a, b);
        panel += rule.weights()[q] * problem.kernel(t, s) * problem.exact(s);
      }
      integral += 0.5 * (b - a) * panel;
    }
    const double r = std::abs(problem.exact(t) - integral - problem.source(t));
    if (std::isnan(r)) return r;
    if (r > worst) worst = r;
  }
  return worst;
}

}  // namespace vie
