#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "vie/error.hpp"
#include "vie/gauss_legendre.hpp"

using namespace vie;
using namespace vie::gl;

namespace {

// Lagrange basis by the product formula; independent of the barycentric path.
double lebesgue_brute_force(const QuadratureRule& rule, int samples) {
  const auto x = rule.nodes();
  double best = 0.0;
  for (int s = 0; s < samples; ++s) {
    const double t = -1.0 + 2.0 * s / (samples - 1);
    double sum = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      double h = 1.0;
      for (std::size_t k = 0; k < x.size(); ++k) {
        if (k != j) h *= (t - x[k]) / (x[j] - x[k]);
      }
      sum += std::abs(h);
    }
    best = std::max(best, sum);
  }
  return best;
}

}  // namespace

TEST_CASE("legendre_pair") {
  auto p = legendre_pair(0, 0.3);
  CHECK(p.value == 1.0);
  CHECK(p.derivative == 0.0);
  p = legendre_pair(1, -0.7);
  CHECK(p.value == -0.7);
  CHECK(p.derivative == 1.0);
  p = legendre_pair(2, 0.5);
  CHECK(p.value == doctest::Approx(-0.125).epsilon(1e-15));
  CHECK(p.derivative == doctest::Approx(1.5).epsilon(1e-15));

  for (int n = 0; n <= 30; ++n) {
    CHECK(legendre_pair(n, 1.0).value == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(legendre_pair(n, -1.0).value == doctest::Approx(n % 2 == 0 ? 1.0 : -1.0).epsilon(1e-14));
    CHECK(legendre_pair(n, 1.0).derivative == doctest::Approx(n * (n + 1) / 2.0).epsilon(1e-13));
  }
}

TEST_CASE("compute_rule small closed forms") {
  const auto r0 = compute_rule(0);
  REQUIRE(r0.size() == 1);
  CHECK(r0.nodes()[0] == 0.0);
  CHECK(r0.weights()[0] == doctest::Approx(2.0).epsilon(1e-15));

  const auto r1 = compute_rule(1);
  CHECK(r1.nodes()[0] == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(r1.nodes()[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(r1.weights()[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(r1.weights()[1] == doctest::Approx(1.0).epsilon(1e-15));

  const auto r2 = compute_rule(2);
  CHECK(r2.nodes()[0] == doctest::Approx(-std::sqrt(0.6)).epsilon(1e-15));
  CHECK(r2.nodes()[1] == 0.0);
  CHECK(r2.nodes()[2] == doctest::Approx(std::sqrt(0.6)).epsilon(1e-15));
  CHECK(r2.weights()[0] == doctest::Approx(5.0 / 9.0).epsilon(1e-15));
  CHECK(r2.weights()[1] == doctest::Approx(8.0 / 9.0).epsilon(1e-15));
  CHECK(r2.weights()[2] == doctest::Approx(5.0 / 9.0).epsilon(1e-15));

  CHECK_THROWS_AS(compute_rule(-1), Error);
}

TEST_CASE("rule invariants for M <= 40") {
  for (int m = 0; m <= 40; ++m) {
    CAPTURE(m);
    const auto rule = compute_rule(m);
    const auto x = rule.nodes();
    const auto w = rule.weights();
    double wsum = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      CHECK(x[i] == -x[rule.size() - 1 - i]);
      CHECK(w[i] == w[rule.size() - 1 - i]);
      CHECK(w[i] > 0.0);
      CHECK(std::abs(x[i]) < 1.0);
      if (i > 0) CHECK(x[i] > x[i - 1]);
      wsum += w[i];
    }
    CHECK(std::abs(wsum - 2.0) <= 1e-13);

    for (int p = 0; p <= 2 * m + 1; ++p) {
      double q = 0.0;
      for (std::size_t i = 0; i < rule.size(); ++i) q += w[i] * std::pow(x[i], p);
      const double exact = p % 2 == 1 ? 0.0 : 2.0 / (p + 1);
      CHECK(std::abs(q - exact) <= 1e-12 * std::max(1.0, exact));
    }
  }
}

TEST_CASE("Newton converges up to M = 200") {
  for (int m : {60, 100, 150, 200}) {
    const auto rule = compute_rule(m);
    double wsum = 0.0;
    for (double w : rule.weights()) wsum += w;
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-12));
  }
}

TEST_CASE("map_rule") {
  const auto r0 = map_rule(compute_rule(0), 0.0, 2.0);
  CHECK(r0.nodes()[0] == 1.0);
  CHECK(r0.weights()[0] == doctest::Approx(2.0).epsilon(1e-15));

  const auto r1 = map_rule(compute_rule(1), 0.0, 1.0);
  const double s = 1.0 / std::sqrt(3.0);
  CHECK(r1.nodes()[0] == doctest::Approx((1 - s) / 2).epsilon(1e-15));
  CHECK(r1.nodes()[1] == doctest::Approx((1 + s) / 2).epsilon(1e-15));
  CHECK(r1.weights()[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(r1.weights()[1] == doctest::Approx(0.5).epsilon(1e-15));

  const auto base = compute_rule(7);
  const auto same = map_rule(base, -1.0, 1.0);
  for (std::size_t i = 0; i < base.size(); ++i) {
    CHECK(same.nodes()[i] == base.nodes()[i]);
    CHECK(same.weights()[i] == base.weights()[i]);
  }

  const auto mapped = map_rule(compute_rule(12), 3.0, 8.0);
  double wsum = 0.0;
  for (std::size_t i = 0; i < mapped.size(); ++i) {
    CHECK(mapped.nodes()[i] > 3.0);
    CHECK(mapped.nodes()[i] < 8.0);
    wsum += mapped.weights()[i];
  }
  CHECK(std::abs(wsum - 5.0) <= 1e-12 * 5.0);

  try {
    (void)map_rule(base, 1.0, 1.0);
    FAIL("expected invalid-interval");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidInterval);
  }
  CHECK_THROWS_AS((void)map_rule(base, 2.0, 1.0), Error);
}

TEST_CASE("discrete_inner_product") {
  const auto r1 = compute_rule(1);
  const std::vector<double> ones{1.0, 1.0};
  CHECK(discrete_inner_product(ones, ones, r1) == doctest::Approx(2.0).epsilon(1e-15));
  const std::vector<double> x(r1.nodes().begin(), r1.nodes().end());
  CHECK(discrete_inner_product(x, x, r1) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));

  const auto r2 = compute_rule(2);
  std::vector<double> cube, square;
  for (double v : r2.nodes()) {
    cube.push_back(v * v * v);
    square.push_back(v * v);
  }
  CHECK(std::abs(discrete_inner_product(cube, square, r2)) <= 1e-16);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-3, 3);
  const auto r9 = compute_rule(9);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> f(10), g(10);
    for (auto& v : f) v = dist(rng);
    for (auto& v : g) v = dist(rng);
    CHECK(discrete_inner_product(f, g, r9) == discrete_inner_product(g, f, r9));
  }

  try {
    (void)discrete_inner_product(ones, std::vector<double>{1.0}, r1);
    FAIL("expected dimension-error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DimensionError);
  }
}

TEST_CASE("interpolate") {
  const auto r3 = compute_rule(3);
  std::vector<double> cube;
  for (double v : r3.nodes()) cube.push_back(v * v * v);
  CHECK(interpolate(r3, cube, 0.42) == doctest::Approx(0.074088).epsilon(1e-14));
  CHECK(interpolate(r3, cube, r3.nodes()[2]) == cube[2]);

  const std::vector<double> c(4, 2.75);
  for (double x : {-1.0, -0.3, 0.0, 0.9, 1.0}) CHECK(std::abs(interpolate(r3, c, x) - 2.75) <= 1e-14);

  // Mapped rule evaluates in physical coordinates and hits nodes exactly.
  const auto mapped = map_rule(compute_rule(6), 2.0, 7.0);
  std::vector<double> vals;
  for (double t : mapped.nodes()) vals.push_back(std::exp(-t));
  CHECK(interpolate(mapped, vals, mapped.nodes()[4]) == vals[4]);
}

TEST_CASE("interpolation reproduces monomials up to the rule degree") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int m = 0; m <= 30; ++m) {
    const auto rule = compute_rule(m);
    for (int q = 0; q <= m; ++q) {
      std::vector<double> vals;
      for (double x : rule.nodes()) vals.push_back(std::pow(x, q));
      for (int s = 0; s < 10; ++s) {
        const double x = dist(rng);
        CHECK(std::abs(interpolate(rule, vals, x) - std::pow(x, q)) <= 1e-11);
      }
    }
  }
}

TEST_CASE("lebesgue_constant") {
  CHECK(lebesgue_constant(compute_rule(0)) == doctest::Approx(1.0).epsilon(1e-15));
  // Two nodes +-1/sqrt(3): |h_0| + |h_1| peaks at the endpoints with value sqrt(3).
  CHECK(lebesgue_constant(compute_rule(1)) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
  CHECK(lebesgue_constant(compute_rule(20)) <= 3.0 * std::sqrt(21.0));

  for (int m : {2, 5, 9}) {
    const auto rule = compute_rule(m);
    CHECK(lebesgue_constant(rule, 4001) == doctest::Approx(lebesgue_brute_force(rule, 4001)).epsilon(1e-10));
  }
  CHECK_THROWS_AS((void)lebesgue_constant(compute_rule(3), 999), Error);
  CHECK(default_lebesgue_samples(0) == 1000);
  CHECK(default_lebesgue_samples(20) == 4410);
  CHECK(default_lebesgue_samples(400) == 1'000'000);
}
