#include "vie/gauss_legendre.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "vie/error.hpp"
#include "vie/kernels.hpp"

namespace vie::gl {

LegendrePair legendre_pair(int n, double x) noexcept {
  if (n <= 0) return {1.0, 0.0};
  // L_{k+1} = ((2k+1) x L_k - k L_{k-1}) / (k+1),  L'_{k+1} = L'_{k-1} + (2k+1) L_k
  double p_prev = 1.0, p = x;
  double d_prev = 0.0, d = 1.0;
  for (int k = 1; k < n; ++k) {
    const double p_next = ((2.0 * k + 1.0) * x * p - k * p_prev) / (k + 1.0);
    const double d_next = d_prev + (2.0 * k + 1.0) * p;
    p_prev = std::exchange(p, p_next);
    d_prev = std::exchange(d, d_next);
  }
  return {p, d};
}

QuadratureRule::QuadratureRule(int degree, std::vector<double> nodes, std::vector<double> weights,
                               std::vector<double> bary)
    : degree_(degree), nodes_(std::move(nodes)), weights_(std::move(weights)), bary_(std::move(bary)) {}

QuadratureRule compute_rule(int degree) {
  if (degree < 0) throw Error(ErrorKind::DomainError, "quadrature degree must be non-negative");
  const int n = degree + 1;  // number of nodes, roots of L_n
  std::vector<double> nodes(n), weights(n);

  for (int i = 0; i < n; ++i) {
    double x = -std::cos(std::numbers::pi * (4.0 * i + 3.0) / (4.0 * degree + 6.0));
    bool converged = false;
    for (int iter = 0; iter < 100; ++iter) {
      const auto [value, deriv] = legendre_pair(n, x);
      const double dx = value / deriv;
      x -= dx;
      if (std::abs(dx) <= 1e-15) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      throw Error(ErrorKind::InternalFailure,
                  "Newton iteration for LG node " + std::to_string(i) + " of degree " + std::to_string(degree) +
                      " did not converge");
    }
    nodes[i] = x;
  }

  for (int i = 0; i < n / 2; ++i) {
    const double x = 0.5 * (nodes[n - 1 - i] - nodes[i]);
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
  }
  if (n % 2 == 1) nodes[n / 2] = 0.0;

  for (int i = 0; i < n; ++i) {
    const double x = nodes[i];
    const double d = legendre_pair(n, x).derivative;
    weights[i] = 2.0 / ((1.0 - x * x) * d * d);
  }
  for (int i = 0; i < n / 2; ++i) {
    const double w = 0.5 * (weights[i] + weights[n - 1 - i]);
    weights[i] = w;
    weights[n - 1 - i] = w;
  }

  // w_j = 1 / prod_{k != j} (x_j - x_k), rescaled to unit max magnitude.
  std::vector<double> bary(n, 1.0);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      if (k != j) bary[j] /= (nodes[j] - nodes[k]);
    }
  }
  double scale = 0.0;
  for (double w : bary) scale = std::max(scale, std::abs(w));
  for (double& w : bary) w /= scale;

  return QuadratureRule(degree, std::move(nodes), std::move(weights), std::move(bary));
}

MappedRule::MappedRule(QuadratureRule parent, double a, double b, std::vector<double> nodes,
                       std::vector<double> weights)
    : parent_(std::move(parent)), a_(a), b_(b), nodes_(std::move(nodes)), weights_(std::move(weights)) {}

MappedRule map_rule(const QuadratureRule& rule, double a, double b) {
  if (!(a < b)) {
    throw Error(ErrorKind::InvalidInterval, "map_rule requires a < b, got [" + std::to_string(a) + ", " +
                                                std::to_string(b) + "]");
  }
  const double half = 0.5 * (b - a);
  std::vector<double> nodes(rule.size()), weights(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) {
    nodes[i] = map_point(rule.nodes()[i], a, b);
    weights[i] = half * rule.weights()[i];
  }
  return MappedRule(rule, a, b, std::move(nodes), std::move(weights));
}

double discrete_inner_product(std::span<const double> f, std::span<const double> g, const QuadratureRule& rule) {
  if (f.size() != rule.size() || g.size() != rule.size()) {
    throw Error(ErrorKind::DimensionError, "inner product expects " + std::to_string(rule.size()) +
                                               " nodal values, got " + std::to_string(f.size()) + " and " +
                                               std::to_string(g.size()));
  }
  return kernels::dot3(f, g, rule.weights());
}

double barycentric_eval(std::span<const double> nodes, std::span<const double> bary, std::span<const double> values,
                        double x) {
  if (nodes.size() == 1) return values[0];
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    if (x == nodes[j]) return values[j];
  }
  const auto [num, den] = kernels::bary_sums(nodes, bary, values, x);
  return num / den;
}

void basis_values(std::span<const double> nodes, std::span<const double> bary, double x, std::span<double> out) {
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    if (x == nodes[j]) {
      std::fill(out.begin(), out.end(), 0.0);
      out[j] = 1.0;
      return;
    }
  }
  double den = 0.0;
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    out[j] = bary[j] / (x - nodes[j]);
    den += out[j];
  }
  for (double& h : out) h /= den;
}

double interpolate(const QuadratureRule& rule, std::span<const double> values, double x) {
  return barycentric_eval(rule.nodes(), rule.bary_weights(), values, x);
}

double interpolate(const MappedRule& rule, std::span<const double> values, double t) {
  return barycentric_eval(rule.nodes(), rule.bary_weights(), values, t);
}

std::size_t default_lebesgue_samples(int degree) noexcept {
  const std::size_t m1 = static_cast<std::size_t>(degree) + 1;
  return std::clamp<std::size_t>(10 * m1 * m1, 1000, 1'000'000);
}

double lebesgue_constant(const QuadratureRule& rule, std::size_t samples) {
  if (samples < 1000) throw Error(ErrorKind::DomainError, "lebesgue_constant needs at least 1000 samples");
  std::vector<double> h(rule.size());
  double best = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const double x = -1.0 + 2.0 * static_cast<double>(s) / static_cast<double>(samples - 1);
    basis_values(rule.nodes(), rule.bary_weights(), x, h);
    double sum = 0.0;
    for (double v : h) sum += std::abs(v);
    best = std::max(best, sum);
  }
  return best;
}

}  // namespace vie::gl
