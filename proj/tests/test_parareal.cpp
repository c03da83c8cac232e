#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include "vie/bench.hpp"
#include "vie/collocation.hpp"
#include "vie/error.hpp"
#include "vie/gauss_legendre.hpp"
#include "vie/kernels.hpp"
#include "vie/parareal.hpp"
#include "vie/problem.hpp"

using namespace vie;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::InternalFailure;
}

PararealConfig config(int m, int mc, int iters, double tol = 0.0) {
  PararealConfig c;
  c.fine_degree = m;
  c.coarse_degree = mc;
  c.max_iters = iters;
  c.stop_tol = tol;
  c.parallel = false;
  return c;
}

bool bit_equal(std::span<const double> a, std::span<const double> b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin());
}

}  // namespace

TEST_CASE("config validation") {
  CHECK_NOTHROW(PararealConfig{}.validate());
  auto c = config(5, 5, 3);
  CHECK(kind_of([&] { c.validate(); }) == ErrorKind::InvalidConfig);
  c.allow_equal_degrees = true;
  CHECK_NOTHROW(c.validate());
  CHECK(kind_of([] { config(5, 6, 3).validate(); }) == ErrorKind::InvalidConfig);
  CHECK(kind_of([] { config(5, 0, 3).validate(); }) == ErrorKind::InvalidConfig);
  CHECK(kind_of([] { config(5, 2, -1).validate(); }) == ErrorKind::InvalidConfig);
  CHECK(kind_of([] { config(5, 2, 1, -1.0).validate(); }) == ErrorKind::InvalidConfig);
  auto bad_linear = config(5, 2, 1);
  bad_linear.linear.max_sweeps = 0;
  CHECK(kind_of([&] { bad_linear.validate(); }) == ErrorKind::InvalidConfig);
}

TEST_CASE("zero kernel converges after one iteration") {
  const auto p = VolterraProblem::create("decoupled", 2.0, [](double, double) { return 0.0; },
                                         [](double t) { return std::exp(t); });
  const PararealSolver solver(p, Partition(4, 2.0), config(8, 2, 2));
  auto state = solver.init();
  CHECK(state.k == 0);
  solver.iterate_once(state);
  CHECK(state.k == 1);
  const auto all = solver.fine().grid().all_nodes();
  for (std::size_t i = 0; i < all.size(); ++i) CHECK(state.current.values()[i] == doctest::Approx(std::exp(all[i])).epsilon(1e-13));
}

TEST_CASE("equal degrees: the corrector vanishes") {
  const auto p = builtin("sin-kernel", 10.0);
  auto c = config(8, 8, 3);
  c.allow_equal_degrees = true;
  const PararealSolver solver(p, Partition(5, 10.0), c);
  CHECK(&solver.fine() == &solver.coarse());
  auto state = solver.init();
  const auto seq = sequential_solve(solver.fine(), c.linear);
  CHECK(bit_equal(state.current.values(), seq.solution.values()));
  solver.iterate_once(state);
  CHECK(state.increments.back() == 0.0);
  CHECK(bit_equal(state.current.values(), seq.solution.values()));
}

TEST_CASE("polynomial solution is exact from the initial iterate") {
  const auto p = builtin("poly-manufactured", 1.0);
  const auto r = run_parareal(p, Partition(4, 1.0), config(6, 2, 0));
  CHECK(bench::linf_error(r.solution, [](double t) { return t; }) <= 1e-12);
}

TEST_CASE("after k iterations the first k blocks match the fine solution") {
  const auto p = builtin("sin-kernel", 12.0);
  const PararealSolver solver(p, Partition(6, 12.0), config(12, 3, 6));
  const auto seq = sequential_solve(solver.fine(), solver.config().linear);
  auto state = solver.init();
  for (int k = 1; k <= 6; ++k) {
    solver.iterate_once(state);
    for (int n = 1; n <= k; ++n) {
      CAPTURE(k);
      CAPTURE(n);
      CHECK(kernels::max_abs_diff(state.current.block(n), seq.solution.block(n)) <= 1e-11);
    }
  }
  // The untouched tail is still far from it for the first iterate of this coarse pair.
  CHECK(kernels::max_abs_diff(solver.init().current.block(6), seq.solution.block(6)) > 1e-6);
}

TEST_CASE("zero iterations return the prolonged coarse sweep") {
  const auto p = builtin("exp-kernel", 20.0);
  const Partition part(5, 20.0);
  const auto r = run_parareal(p, part, config(14, 5, 0));
  const auto coarse = sequential_solve(p, part, gl::compute_rule(5));
  const auto prolonged = resample(coarse, gl::compute_rule(14));
  CHECK(bit_equal(r.solution.values(), prolonged.values()));
  CHECK(r.report.iterations.size() == 1);
  CHECK(r.report.iterations[0].increment == 0.0);
}

TEST_CASE("run reports one record per iterate") {
  const auto p = builtin("sin-kernel", 100.0);
  const auto c = config(25, 13, 5, 0.0);
  const auto r = run_parareal(p, Partition(20, 100.0), c, [&](const NodalSolution& u) {
    return bench::linf_error(u, [&](double t) { return p.exact(t); });
  });
  REQUIRE(r.report.iterations.size() == 6);
  for (int k = 0; k <= 5; ++k) {
    CHECK(r.report.iterations[k].k == k);
    CHECK(r.report.iterations[k].linf_error.has_value());
  }
  CHECK(r.report.iterations[1].fine_sweeps > 0);
  CHECK(r.report.iterations[5].fine_sweeps >= r.report.iterations[1].fine_sweeps);
  CHECK(*r.report.iterations[5].linf_error <= 1e-8);
  CHECK_FALSE(r.report.converged);
}

TEST_CASE("stop tolerance ends the run early") {
  const auto p = builtin("poly-manufactured", 1.0);
  const auto r = run_parareal(p, Partition(4, 1.0), config(6, 3, 10, 1e-12));
  CHECK(r.report.converged);
  CHECK(r.report.iterations.size() < 11);
}

TEST_CASE("fixed_point_gap") {
  CHECK(fixed_point_gap(builtin("poly-manufactured", 1.0), Partition(4, 1.0), config(6, 2, 10, 1e-13)) <= 1e-12);
  CHECK(fixed_point_gap(builtin("exp-kernel", 20.0), Partition(5, 20.0), config(12, 6, 20, 1e-12)) <= 1e-9);
  CHECK(kind_of([] {
          (void)fixed_point_gap(builtin("sin-kernel", 100.0), Partition(20, 100.0), config(25, 5, 1, 1e-14));
        }) == ErrorKind::NotConverged);
}

TEST_CASE("parallel correction is bit-identical to serial") {
  const auto p = builtin("sin-kernel", 40.0);
  auto serial = config(16, 7, 4);
  auto par = serial;
  par.parallel = true;
  par.threads = 4;
  const auto a = run_parareal(p, Partition(8, 40.0), serial);
  const auto b = run_parareal(p, Partition(8, 40.0), par);
  CHECK(bit_equal(a.solution.values(), b.solution.values()));
  for (std::size_t k = 0; k < a.report.iterations.size(); ++k)
    CHECK(a.report.iterations[k].increment == b.report.iterations[k].increment);
}

TEST_CASE("non-finite fine data is reported as divergence") {
  // The NaN window sits between the validation grid points but covers a fine node.
  const auto p = VolterraProblem::create(
      "poisoned", 1.0, [](double, double) { return 0.5; },
      [](double t) { return t > 0.005 && t < 0.025 ? std::nan("") : 1.0; });
  const PararealSolver solver(p, Partition(4, 1.0), config(5, 2, 3));
  auto state = solver.init();
  CHECK(kind_of([&] { solver.iterate_once(state); }) == ErrorKind::Divergence);
  CHECK(kind_of([&] { (void)solver.run(); }) == ErrorKind::Divergence);
}

TEST_CASE("propagator-sharing constructor checks its inputs") {
  const auto p = builtin("exp-kernel", 4.0);
  const Partition part(2, 4.0);
  auto fine = std::make_shared<const Propagator>(p, CollocationGrid::create(part, gl::compute_rule(8)));
  auto coarse = std::make_shared<const Propagator>(p, CollocationGrid::create(part, gl::compute_rule(3)));
  CHECK_NOTHROW(PararealSolver(fine, coarse, config(8, 3, 2)));
  CHECK(kind_of([&] { PararealSolver(fine, coarse, config(9, 3, 2)); }) == ErrorKind::InvalidConfig);
  auto other = std::make_shared<const Propagator>(p, CollocationGrid::create(Partition(3, 4.0), gl::compute_rule(3)));
  CHECK(kind_of([&] { PararealSolver(fine, other, config(8, 3, 2)); }) == ErrorKind::InvalidConfig);
}
