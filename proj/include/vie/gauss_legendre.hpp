#pragma once

// Legendre polynomials, Legendre-Gauss quadrature and barycentric Lagrange
// interpolation on the LG points. Everything here is immutable after
// construction and safe to share across threads.

#include <cstddef>
#include <span>
#include <vector>

namespace vie::gl {

struct LegendrePair {
  double value;
  double derivative;
};

/// (L_n(x), L_n'(x)) from the three-term recurrence.
LegendrePair legendre_pair(int n, double x) noexcept;

/// Legendre-Gauss rule with degree+1 nodes on [-1, 1]: the roots of
/// L_{degree+1}, their quadrature weights, and barycentric weights.
class QuadratureRule {
 public:
  [[nodiscard]] int degree() const noexcept { return degree_; }
  [[nodiscard]] std::size_t size() const noexcept { return nodes_.size(); }
  [[nodiscard]] std::span<const double> nodes() const noexcept { return nodes_; }
  [[nodiscard]] std::span<const double> weights() const noexcept { return weights_; }
  [[nodiscard]] std::span<const double> bary_weights() const noexcept { return bary_; }

 private:
  friend QuadratureRule compute_rule(int degree);
  QuadratureRule(int degree, std::vector<double> nodes, std::vector<double> weights, std::vector<double> bary);

  int degree_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<double> bary_;
};

/// Newton iteration on L_{M+1} from Chebyshev-type initial guesses, followed by
/// symmetrization so node i equals -node(M-i) bit for bit.
/// Throws InternalFailure if Newton does not settle in 100 steps.
QuadratureRule compute_rule(int degree);

/// The rule transported to [a, b]. Barycentric weights are shared with the
/// parent: they are invariant under affine maps up to a common factor.
class MappedRule {
 public:
  [[nodiscard]] const QuadratureRule& parent() const noexcept { return parent_; }
  [[nodiscard]] double a() const noexcept { return a_; }
  [[nodiscard]] double b() const noexcept { return b_; }
  [[nodiscard]] std::size_t size() const noexcept { return nodes_.size(); }
  [[nodiscard]] std::span<const double> nodes() const noexcept { return nodes_; }
  [[nodiscard]] std::span<const double> weights() const noexcept { return weights_; }
  [[nodiscard]] std::span<const double> bary_weights() const noexcept { return parent_.bary_weights(); }

 private:
  friend MappedRule map_rule(const QuadratureRule& rule, double a, double b);
  MappedRule(QuadratureRule parent, double a, double b, std::vector<double> nodes, std::vector<double> weights);

  QuadratureRule parent_;
  double a_;
  double b_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

/// Throws InvalidInterval unless a < b.
MappedRule map_rule(const QuadratureRule& rule, double a, double b);

/// Affine image of a reference point x in [-1, 1] onto [a, b].
[[nodiscard]] inline double map_point(double x, double a, double b) noexcept {
  return 0.5 * (b - a) * x + 0.5 * (b + a);
}

/// sum_i f_i g_i w_i. Throws DimensionError on length mismatch.
double discrete_inner_product(std::span<const double> f, std::span<const double> g, const QuadratureRule& rule);

/// Second-form barycentric evaluation through (nodes[j], values[j]).
/// Returns values[j] unchanged when x == nodes[j].
double barycentric_eval(std::span<const double> nodes, std::span<const double> bary,
                        std::span<const double> values, double x);

/// All Lagrange basis values h_j(x) for the given node set, written to `out`.
void basis_values(std::span<const double> nodes, std::span<const double> bary, double x, std::span<double> out);

double interpolate(const QuadratureRule& rule, std::span<const double> values, double x);
double interpolate(const MappedRule& rule, std::span<const double> values, double t);

/// Default sampling resolution: 10 (M+1)^2 points, clamped to [1000, 10^6].
std::size_t default_lebesgue_samples(int degree) noexcept;

/// max over `samples` equispaced points of sum_j |h_j(x)|. Requires samples >= 1000.
double lebesgue_constant(const QuadratureRule& rule, std::size_t samples);
inline double lebesgue_constant(const QuadratureRule& rule) {
  return lebesgue_constant(rule, default_lebesgue_samples(rule.degree()));
}

}  // namespace vie::gl
