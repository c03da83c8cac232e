#pragma once

// Linear Volterra equations of the second kind,
//   u(t) - \int_0^t K(t,s) u(s) ds = g(t),   0 <= t <= T,
// and the built-in benchmark problems.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace vie {

using KernelFn = std::function<double(double t, double s)>;
using ScalarFn = std::function<double(double t)>;

class VolterraProblem {
 public:
  /// Validates the problem: kernel, source and exact solution must be finite on
  /// a spot-check grid, and a supplied exact solution must pass
  /// residual_check(*, 20) <= 1e-8. Throws InvalidProblem otherwise.
  static VolterraProblem create(std::string name, double horizon, KernelFn kernel, ScalarFn source,
                                std::optional<ScalarFn> exact = std::nullopt);

  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  [[nodiscard]] double horizon() const noexcept { return horizon_; }
  [[nodiscard]] double kernel(double t, double s) const { return kernel_(t, s); }
  [[nodiscard]] double source(double t) const { return source_(t); }
  [[nodiscard]] bool has_exact() const noexcept { return exact_.has_value(); }
  /// Throws NotApplicable when no exact solution is known.
  [[nodiscard]] double exact(double t) const;

  /// Same equation on a different horizon (revalidated).
  [[nodiscard]] VolterraProblem with_horizon(double horizon) const;

 private:
  VolterraProblem(std::string name, double horizon, KernelFn kernel, ScalarFn source, std::optional<ScalarFn> exact);

  std::string name_;
  double horizon_;
  KernelFn kernel_;
  ScalarFn source_;
  std::optional<ScalarFn> exact_;
};

/// "sin-kernel", "exp-kernel" or "poly-manufactured". Throws UnknownProblem.
VolterraProblem builtin(std::string_view name, double horizon);

std::span<const std::string_view> builtin_names() noexcept;

/// max over t_samples equispaced times in (0, T] of |u(t) - \int_0^t K u - g(t)|,
/// with the integral from a 32-panel composite LG rule of degree 50.
/// Throws NotApplicable without an exact solution.
double residual_check(const VolterraProblem& problem, int t_samples);

}  // namespace vie
