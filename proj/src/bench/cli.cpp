#include <CLI11.hpp>
#include <cstdio>
#include <ostream>
#include <string>

#include "vie/bench.hpp"
#include "vie/error.hpp"
#include "vie/kernels.hpp"

namespace vie::bench {
namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string g3(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

bool is_usage_error(ErrorKind kind) {
  return kind == ErrorKind::SpecError || kind == ErrorKind::InvalidConfig || kind == ErrorKind::UnknownProblem;
}

struct CommonFlags {
  std::string problem;
  double T = 1.0;
  int N = 4;
  std::string fine = "8";
  std::string coarse = "4";
  std::string iters = "10";
  double tol = 1e-12;
  bool parallel = true;
  std::string out;
  std::string plot;
};

void add_common(CLI::App& cmd, CommonFlags& f) {
  cmd.add_option("--problem", f.problem, "sin-kernel | exp-kernel | poly-manufactured")->required();
  cmd.add_option("--T", f.T, "time horizon")->capture_default_str();
  cmd.add_option("--N", f.N, "number of subintervals")->capture_default_str();
  cmd.add_option("--M", f.fine, "fine degree (list or a:b:step range where swept)")->capture_default_str();
  cmd.add_option("--Mc", f.coarse, "coarse degree (list or range where swept)")->capture_default_str();
  cmd.add_option("--iters,--k", f.iters, "iteration cap, or recorded k values for error-vs-Mc")->capture_default_str();
  cmd.add_option("--tol", f.tol, "stop when the iterate increment drops to this (0 disables)")->capture_default_str();
  cmd.add_option("--parallel", f.parallel, "run the correction stage concurrently")->capture_default_str();
  cmd.add_option("--out", f.out, "CSV output path");
  cmd.add_option("--plot", f.plot, "SVG plot output path");
}

ExperimentSpec to_spec(const CommonFlags& f, Family family) {
  ExperimentSpec spec;
  spec.family = family;
  spec.problem = f.problem;
  spec.T = f.T;
  spec.N = f.N;
  spec.fine_degrees = parse_int_list(f.fine);
  spec.coarse_degrees = parse_int_list(f.coarse);
  spec.iterations = parse_int_list(f.iters);
  spec.stop_tol = f.tol;
  spec.parallel = f.parallel;
  spec.out_path = f.out;
  spec.plot_path = f.plot;
  return spec;
}

int run_solve(const CommonFlags& f, const std::string& mode_name, std::ostream& out) {
  auto spec = to_spec(f, Family::Single);
  spec.mode = parse_mode(mode_name);
  const auto records = run_experiment(spec);

  out << "problem=" << spec.problem << " T=" << spec.T << " N=" << spec.N << " M=" << f.fine << " Mc=" << f.coarse
      << " mode=" << to_string(spec.mode) << " simd=" << kernels::to_string(kernels::active().isa) << '\n';
  for (const auto& r : records) {
    out << "k=" << r.k << " increment=" << g3(r.increment) << " linf_error=" << g3(r.linf_error)
        << " fine_sweeps=" << r.fine_sweeps << " coarse_sweeps=" << r.coarse_sweeps << " wall_ms=" << g3(r.wall_ms)
        << '\n';
  }
  const auto& last = records.back();
  out << "final linf_error = " << g17(last.linf_error) << '\n';
  if (spec.mode == Mode::Parareal && last.k > 0) {
    const auto est = speedup_estimate(spec.N, last.M, last.Mc, last.k);
    out << "cost model: sequential=" << g3(est.sequential_cost) << " parareal=" << g3(est.parareal_cost)
        << " speedup=" << g3(est.speedup) << " asymptotic_bound=" << g3(est.asymptotic_bound) << '\n';
  }
  return 0;
}

int run_experiment_cmd(const CommonFlags& f, const std::string& family_name, std::ostream& out) {
  const auto spec = to_spec(f, parse_family(family_name));
  const auto records = run_experiment(spec);
  if (spec.out_path.empty()) {
    write_csv(out, records);
  } else {
    out << "wrote " << records.size() << " records to " << spec.out_path << '\n';
  }
  if (!spec.plot_path.empty()) out << "wrote plot to " << spec.plot_path << '\n';
  return 0;
}

int run_speedup(int N, int M, int Mc, int K, std::ostream& out) {
  const auto est = speedup_estimate(N, M, Mc, K);
  out << "N=" << N << " M=" << M << " Mc=" << Mc << " K=" << K << '\n';
  out << "sequential_cost = " << g17(est.sequential_cost) << '\n';
  out << "parareal_cost = " << g17(est.parareal_cost) << '\n';
  out << "model_speedup = " << g17(est.speedup) << '\n';
  out << "asymptotic_bound = " << g17(est.asymptotic_bound) << '\n';
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Parallel-in-time spectral collocation solver for Volterra integral equations", "vie-parareal"};
  app.require_subcommand(1);

  CommonFlags solve_flags;
  std::string mode = "parareal";
  auto* solve = app.add_subcommand("solve", "solve one problem and report errors per iteration");
  add_common(*solve, solve_flags);
  solve->add_option("--mode", mode, "parareal | sequential-fine | sequential-coarse")->capture_default_str();

  CommonFlags exp_flags;
  std::string family;
  auto* experiment = app.add_subcommand("experiment", "run a convergence sweep");
  experiment->add_option("family", family, "error-vs-M | error-vs-k | error-vs-Mc | single")->required();
  add_common(*experiment, exp_flags);

  int sN = 0, sM = 0, sMc = 0, sK = 0;
  auto* speedup = app.add_subcommand("speedup", "evaluate the parallel cost model");
  speedup->add_option("--N", sN, "number of subintervals")->required();
  speedup->add_option("--M", sM, "fine degree")->required();
  speedup->add_option("--Mc", sMc, "coarse degree")->required();
  speedup->add_option("--K", sK, "parareal iterations")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (*solve) return run_solve(solve_flags, mode, out);
    if (*experiment) return run_experiment_cmd(exp_flags, family, out);
    return run_speedup(sN, sM, sMc, sK, out);
  } catch (const Error& e) {
    err << "vie-parareal: " << e.what() << '\n';
    return is_usage_error(e.kind()) ? 2 : 1;
  } catch (const std::exception& e) {
    err << "vie-parareal: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace vie::bench
