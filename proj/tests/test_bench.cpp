#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "vie/bench.hpp"
#include "vie/collocation.hpp"
#include "vie/error.hpp"
#include "vie/gauss_legendre.hpp"

using namespace vie;
using namespace vie::bench;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::InternalFailure;
}

ExperimentSpec small_k_sweep() {
  ExperimentSpec s;
  s.family = Family::ErrorVsK;
  s.problem = "exp-kernel";
  s.T = 10.0;
  s.N = 5;
  s.fine_degrees = {10};
  s.coarse_degrees = {3, 4, 5};
  s.iterations = {10};
  s.parallel = false;
  return s;
}

}  // namespace

TEST_CASE("linf_error") {
  const auto grid = CollocationGrid::create(Partition(2, 2.0), gl::compute_rule(3));
  NodalSolution u(grid);
  CHECK(linf_error(u, [](double) { return 0.0; }) == 0.0);
  CHECK(linf_error(u, [](double t) { return t; }) == doctest::Approx(2.0));
  for (std::size_t i = 0; i < grid->all_nodes().size(); ++i) u.values()[i] = grid->all_nodes()[i];
  CHECK(linf_error(u, [](double t) { return t; }) <= 1e-14);
  // Error peaks between nodes for a quadratic the cubic cannot miss, but a quartic can.
  for (std::size_t i = 0; i < grid->all_nodes().size(); ++i) u.values()[i] = std::pow(grid->all_nodes()[i], 4);
  CHECK(linf_error(u, [](double t) { return std::pow(t, 4); }) > 1e-3);
  CHECK(std::isnan(linf_error(u, [](double) { return std::nan(""); })));
}

TEST_CASE("speedup_estimate") {
  const auto e = speedup_estimate(20, 25, 5, 6);
  CHECK(e.sequential_cost == 20.0 * 25 * 25 * 25);
  CHECK(e.parareal_cost == 6.0 * (20 * 25 + 2 * 20 * 25 * 5 + 625));
  CHECK(e.speedup == doctest::Approx(e.sequential_cost / e.parareal_cost));
  CHECK(e.asymptotic_bound == doctest::Approx(14.3678).epsilon(1e-4));

  CHECK(speedup_estimate(20, 25, 5, 7).asymptotic_bound < e.asymptotic_bound);
  CHECK(speedup_estimate(20, 25, 6, 6).asymptotic_bound < e.asymptotic_bound);
  CHECK(speedup_estimate(40, 25, 5, 6).asymptotic_bound > e.asymptotic_bound);
  CHECK(speedup_estimate(20, 30, 5, 6).asymptotic_bound > e.asymptotic_bound);

  CHECK(kind_of([] { (void)speedup_estimate(0, 25, 5, 6); }) == ErrorKind::SpecError);
  CHECK(kind_of([] { (void)speedup_estimate(20, 5, 5, 6); }) == ErrorKind::SpecError);
  CHECK(kind_of([] { (void)speedup_estimate(20, 25, 5, 0); }) == ErrorKind::SpecError);
  CHECK(kind_of([] { (void)speedup_estimate(20, 25, -1, 3); }) == ErrorKind::SpecError);
}

TEST_CASE("family and mode names") {
  for (auto f : {Family::ErrorVsM, Family::ErrorVsK, Family::ErrorVsMc, Family::Single})
    CHECK(parse_family(to_string(f)) == f);
  for (auto m : {Mode::Parareal, Mode::SequentialFine, Mode::SequentialCoarse}) CHECK(parse_mode(to_string(m)) == m);
  CHECK(kind_of([] { (void)parse_family("error-vs-T"); }) == ErrorKind::SpecError);
  CHECK(kind_of([] { (void)parse_mode("fast"); }) == ErrorKind::SpecError);
}

TEST_CASE("parse_int_list") {
  CHECK(parse_int_list("7") == std::vector<int>{7});
  CHECK(parse_int_list("4,6:10:2") == std::vector<int>{4, 6, 8, 10});
  CHECK(parse_int_list("2:5") == std::vector<int>{2, 3, 4, 5});
  CHECK(parse_int_list("14:26:4") == std::vector<int>{14, 18, 22, 26});
  for (const char* bad : {"", "a", "3,", "1:2:0", "5:2", "1.5", "2::3"})
    CHECK(kind_of([&] { (void)parse_int_list(bad); }) == ErrorKind::SpecError);
}

TEST_CASE("ExperimentSpec::validate") {
  CHECK_NOTHROW(small_k_sweep().validate());
  auto s = small_k_sweep();
  s.problem = "nope";
  CHECK(kind_of([&] { s.validate(); }) == ErrorKind::SpecError);
  s = small_k_sweep();
  s.coarse_degrees = {3, 10};
  CHECK(kind_of([&] { s.validate(); }) == ErrorKind::SpecError);
  s = small_k_sweep();
  s.coarse_degrees = {4, 3};
  CHECK(kind_of([&] { s.validate(); }) == ErrorKind::SpecError);
  s = small_k_sweep();
  s.fine_degrees = {10, 12};
  CHECK(kind_of([&] { s.validate(); }) == ErrorKind::SpecError);
  s = small_k_sweep();
  s.N = 0;
  CHECK(kind_of([&] { s.validate(); }) == ErrorKind::SpecError);
  s = small_k_sweep();
  s.iterations = {0};
  CHECK(kind_of([&] { s.validate(); }) == ErrorKind::SpecError);

  ExperimentSpec seq;
  seq.problem = "poly-manufactured";
  seq.mode = Mode::SequentialFine;
  seq.fine_degrees = {4};
  CHECK_NOTHROW(seq.validate());
}

TEST_CASE("error-vs-k sweep") {
  auto spec = small_k_sweep();
  const auto records = run_experiment(spec);
  REQUIRE(records.size() == 30);
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(records[i].experiment == "error-vs-k");
    CHECK(records[i].M == 10);
    CHECK(records[i].Mc == 3 + static_cast<int>(i / 10));
    CHECK(records[i].k == 1 + static_cast<int>(i % 10));
    CHECK(std::isfinite(records[i].linf_error));
  }

  // Everything but timing is deterministic.
  auto again = run_experiment(spec);
  auto strip = [](std::vector<ErrorRecord> v) {
    for (auto& r : v) r.wall_ms = 0.0;
    return v;
  };
  CHECK(strip(records) == strip(again));

  spec.parallel = true;
  spec.threads = 3;
  CHECK(strip(run_experiment(spec)) == strip(records));
}

TEST_CASE("error-vs-M and single runs") {
  ExperimentSpec s;
  s.family = Family::ErrorVsM;
  s.problem = "exp-kernel";
  s.T = 10.0;
  s.N = 5;
  s.fine_degrees = {6, 8, 10};
  s.coarse_degrees = {4};
  s.iterations = {15};
  s.parallel = false;
  const auto r = run_experiment(s);
  REQUIRE(r.size() == 3);
  CHECK(r[2].linf_error < r[0].linf_error);

  ExperimentSpec seq;
  seq.problem = "poly-manufactured";
  seq.mode = Mode::SequentialCoarse;
  seq.coarse_degrees = {3};
  seq.N = 3;
  const auto one = run_experiment(seq);
  REQUIRE(one.size() == 1);
  CHECK(one[0].linf_error <= 1e-12);
}

TEST_CASE("CSV round trip and files") {
  const auto records = run_experiment(small_k_sweep());
  std::stringstream ss;
  write_csv(ss, records);
  const std::string text = ss.str();
  CHECK(text.rfind(std::string(kCsvHeader) + "\n", 0) == 0);
  CHECK(read_csv(ss) == records);

  std::istringstream bad("experiment,problem\nfoo,bar\n");
  CHECK(kind_of([&] { (void)read_csv(bad); }) == ErrorKind::SpecError);

  const auto dir = std::filesystem::temp_directory_path() / "vie_bench_test";
  std::filesystem::create_directories(dir);
  auto spec = small_k_sweep();
  spec.out_path = (dir / "k.csv").string();
  spec.plot_path = (dir / "k.svg").string();
  (void)run_experiment(spec);
  std::ifstream csv(spec.out_path);
  const auto from_file = read_csv(csv);
  CHECK(from_file.size() == 30);
  CHECK(std::filesystem::file_size(spec.plot_path) > 0);

  spec.out_path = "/nonexistent-dir/x.csv";
  CHECK(kind_of([&] { (void)run_experiment(spec); }) == ErrorKind::IoError);
}

TEST_CASE("render_svg") {
  const auto records = run_experiment(small_k_sweep());
  const auto svg = render_svg(Family::ErrorVsK, records);
  CHECK(svg.find("<svg") == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  std::size_t lines = 0, dots = 0;
  for (std::size_t p = svg.find("<polyline"); p != std::string::npos; p = svg.find("<polyline", p + 1)) ++lines;
  for (std::size_t p = svg.find("<circle"); p != std::string::npos; p = svg.find("<circle", p + 1)) ++dots;
  CHECK(lines == 3);
  CHECK(dots >= 30);
  CHECK(svg.find("Mc=4") != std::string::npos);
}

TEST_CASE("fit_coarse_slope") {
  std::vector<ErrorRecord> rs;
  // error = 10^{-0.5 (k+1) Mc}: slope -(k+1)/2 in log10.
  for (int k = 1; k <= 2; ++k)
    for (int mc = 2; mc <= 8; ++mc) {
      ErrorRecord r;
      r.k = k;
      r.Mc = mc;
      r.linf_error = std::pow(10.0, -0.5 * (k + 1) * mc);
      rs.push_back(r);
    }
  const auto f1 = fit_coarse_slope(rs, 1, 0.0);
  CHECK(f1.points == 7);
  CHECK(f1.slope == doctest::Approx(-1.0));
  CHECK(f1.c == doctest::Approx(0.5 / std::log10(std::exp(1.0))));

  // Floor and ceiling trim the window.
  const auto f2 = fit_coarse_slope(rs, 2, 1e-14, 1e-4);
  CHECK(f2.points == 6);
  CHECK(f2.slope == doctest::Approx(-1.5));

  CHECK(std::isnan(fit_coarse_slope(rs, 5, 0.0).slope));
}
