#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <numbers>
#include <string>

#include "vie/bench.hpp"
#include "vie/error.hpp"
#include "vie/parareal.hpp"

namespace vie::bench {

double linf_error(const NodalSolution& solution, const ScalarFn& exact) {
  double worst = 0.0;
  auto probe = [&](double t) {
    const double e = std::abs(evaluate(solution, t) - exact(t));
    if (std::isnan(e) || e > worst) worst = e;
  };
  for (double t : solution.grid().all_nodes()) probe(t);
  const auto& part = solution.partition();
  for (int n = 1; n <= part.count(); ++n) {
    const double a = part.breakpoint(n - 1);
    const double b = part.breakpoint(n);
    probe(a);
    for (int p = 1; p + 1 < kProbesPerInterval; ++p) probe(a + (b - a) * p / (kProbesPerInterval - 1));
    probe(b);
  }
  return worst;
}

std::string_view to_string(Family family) noexcept {
  switch (family) {
    case Family::ErrorVsM: return "error-vs-M";
    case Family::ErrorVsK: return "error-vs-k";
    case Family::ErrorVsMc: return "error-vs-Mc";
    case Family::Single: return "single";
  }
  return "unknown";
}

std::string_view to_string(Mode mode) noexcept {
  switch (mode) {
    case Mode::Parareal: return "parareal";
    case Mode::SequentialFine: return "sequential-fine";
    case Mode::SequentialCoarse: return "sequential-coarse";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  for (auto f : {Family::ErrorVsM, Family::ErrorVsK, Family::ErrorVsMc, Family::Single}) {
    if (name == to_string(f)) return f;
  }
  throw Error(ErrorKind::SpecError, "unknown experiment family '" + std::string(name) + "'");
}

Mode parse_mode(std::string_view name) {
  for (auto m : {Mode::Parareal, Mode::SequentialFine, Mode::SequentialCoarse}) {
    if (name == to_string(m)) return m;
  }
  throw Error(ErrorKind::SpecError, "unknown mode '" + std::string(name) + "'");
}

namespace {

int parse_one_int(std::string_view text) {
  if (text.empty()) throw Error(ErrorKind::SpecError, "empty integer in list");
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(std::string(text), &used);
  } catch (const std::exception&) {
    throw Error(ErrorKind::SpecError, "bad integer '" + std::string(text) + "'");
  }
  if (used != text.size()) throw Error(ErrorKind::SpecError, "bad integer '" + std::string(text) + "'");
  return v;
}

}  // namespace

std::vector<int> parse_int_list(std::string_view text) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string_view item = text.substr(pos, comma - pos);
    const std::size_t c1 = item.find(':');
    if (c1 == std::string_view::npos) {
      out.push_back(parse_one_int(item));
    } else {
      const std::size_t c2 = item.find(':', c1 + 1);
      const int a = parse_one_int(item.substr(0, c1));
      const int b = parse_one_int(item.substr(c1 + 1, c2 == std::string_view::npos ? item.npos : c2 - c1 - 1));
      const int step = c2 == std::string_view::npos ? 1 : parse_one_int(item.substr(c2 + 1));
      if (step <= 0 || b < a) throw Error(ErrorKind::SpecError, "bad range '" + std::string(item) + "'");
      for (int v = a; v <= b; v += step) out.push_back(v);
    }
    pos = comma + 1;
  }
  return out;
}

void ExperimentSpec::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::SpecError, msg); };
  auto increasing = [](const std::vector<int>& v) { return std::adjacent_find(v.begin(), v.end(), std::greater_equal<>()) == v.end(); };

  const auto names = builtin_names();
  if (std::find(names.begin(), names.end(), problem) == names.end()) fail("unknown problem '" + problem + "'");
  if (!(T > 0.0) || !std::isfinite(T)) fail("T must be positive");
  if (N < 1) fail("N must be at least 1");
  if (!increasing(fine_degrees) || !increasing(coarse_degrees) || !increasing(iterations)) {
    fail("sweep lists must be strictly increasing");
  }
  if (std::any_of(fine_degrees.begin(), fine_degrees.end(), [](int m) { return m < 1; })) fail("M must be >= 1");
  if (std::any_of(coarse_degrees.begin(), coarse_degrees.end(), [](int m) { return m < 1; })) fail("Mc must be >= 1");
  if (std::any_of(iterations.begin(), iterations.end(), [](int k) { return k < 0; })) fail("iterations must be >= 0");

  auto need = [&](const std::vector<int>& v, const char* what, bool single) {
    if (v.empty()) fail(std::string(what) + " is required");
    if (single && v.size() != 1) fail(std::string(what) + " takes a single value for " + std::string(to_string(family)));
  };
  switch (family) {
    case Family::ErrorVsM:
      need(fine_degrees, "M", false);
      need(coarse_degrees, "Mc", true);
      need(iterations, "iters", true);
      break;
    case Family::ErrorVsK:
      need(fine_degrees, "M", true);
      need(coarse_degrees, "Mc", false);
      need(iterations, "iters", true);
      if (iterations.front() < 1) fail("error-vs-k needs iters >= 1");
      break;
    case Family::ErrorVsMc:
      need(fine_degrees, "M", true);
      need(coarse_degrees, "Mc", false);
      need(iterations, "iters", false);
      break;
    case Family::Single:
      if (mode != Mode::SequentialCoarse) need(fine_degrees, "M", true);
      if (mode != Mode::SequentialFine) need(coarse_degrees, "Mc", true);
      if (mode == Mode::Parareal) need(iterations, "iters", true);
      break;
  }
  if (family == Family::Single && mode != Mode::Parareal) return;
  for (int m : fine_degrees) {
    for (int mc : coarse_degrees) {
      if (mc >= m) fail("Mc=" + std::to_string(mc) + " must be below M=" + std::to_string(m));
    }
  }
}

namespace {

using Clock = std::chrono::steady_clock;

class PropagatorCache {
 public:
  PropagatorCache(const VolterraProblem& problem, const Partition& partition)
      : problem_(problem), partition_(partition) {}

  std::shared_ptr<const Propagator> get(int degree) {
    auto& slot = cache_[degree];
    if (!slot) {
      slot = std::make_shared<const Propagator>(problem_,
                                                CollocationGrid::create(partition_, gl::compute_rule(degree)));
    }
    return slot;
  }

 private:
  const VolterraProblem& problem_;
  const Partition& partition_;
  std::map<int, std::shared_ptr<const Propagator>> cache_;
};

ErrorRecord make_record(const ExperimentSpec& spec, int M, int Mc, const IterationRecord& it) {
  ErrorRecord r;
  r.experiment = std::string(to_string(spec.family));
  r.problem = spec.problem;
  r.T = spec.T;
  r.N = spec.N;
  r.M = M;
  r.Mc = Mc;
  r.k = it.k;
  r.linf_error = it.linf_error.value_or(std::numeric_limits<double>::quiet_NaN());
  r.increment = it.increment;
  r.wall_ms = it.elapsed_ms;
  r.fine_sweeps = it.fine_sweeps;
  r.coarse_sweeps = it.coarse_sweeps;
  return r;
}

void write_outputs(const ExperimentSpec& spec, const std::vector<ErrorRecord>& records) {
  if (!spec.out_path.empty()) {
    std::ofstream out(spec.out_path, std::ios::binary);
    if (!out) throw Error(ErrorKind::IoError, "cannot open " + spec.out_path);
    write_csv(out, records);
    if (!out) throw Error(ErrorKind::IoError, "failed writing " + spec.out_path);
  }
  if (!spec.plot_path.empty()) {
    std::ofstream out(spec.plot_path, std::ios::binary);
    if (!out) throw Error(ErrorKind::IoError, "cannot open " + spec.plot_path);
    out << render_svg(spec.family, records);
    if (!out) throw Error(ErrorKind::IoError, "failed writing " + spec.plot_path);
  }
}

}  // namespace

std::vector<ErrorRecord> run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  const auto problem = builtin(spec.problem, spec.T);
  const Partition partition(spec.N, spec.T);
  PropagatorCache cache(problem, partition);

  SolutionMonitor monitor;
  if (problem.has_exact()) {
    monitor = [&problem](const NodalSolution& s) { return linf_error(s, [&](double t) { return problem.exact(t); }); };
  }

  auto make_config = [&](int M, int Mc, int iters, double stop_tol) {
    PararealConfig cfg;
    cfg.fine_degree = M;
    cfg.coarse_degree = Mc;
    cfg.max_iters = iters;
    cfg.stop_tol = stop_tol;
    cfg.linear = spec.linear;
    cfg.parallel = spec.parallel;
    cfg.threads = spec.threads;
    return cfg;
  };
  auto run = [&](int M, int Mc, int iters, double stop_tol) {
    const PararealSolver solver(cache.get(M), cache.get(Mc), make_config(M, Mc, iters, stop_tol));
    return solver.run(monitor);
  };

  std::vector<ErrorRecord> records;
  switch (spec.family) {
    case Family::ErrorVsM: {
      const int Mc = spec.coarse_degrees.front();
      for (int M : spec.fine_degrees) {
        const auto res = run(M, Mc, spec.iterations.front(), spec.stop_tol);
        records.push_back(make_record(spec, M, Mc, res.report.iterations.back()));
      }
      break;
    }
    case Family::ErrorVsK: {
      const int M = spec.fine_degrees.front();
      for (int Mc : spec.coarse_degrees) {
        const auto res = run(M, Mc, spec.iterations.front(), 0.0);
        for (std::size_t k = 1; k < res.report.iterations.size(); ++k) {
          records.push_back(make_record(spec, M, Mc, res.report.iterations[k]));
        }
      }
      break;
    }
    case Family::ErrorVsMc: {
      const int M = spec.fine_degrees.front();
      // One run per Mc serves every k; records are grouped by k.
      std::vector<std::vector<ErrorRecord>> by_k(spec.iterations.size());
      for (int Mc : spec.coarse_degrees) {
        const auto res = run(M, Mc, spec.iterations.back(), 0.0);
        for (std::size_t idx = 0; idx < spec.iterations.size(); ++idx) {
          by_k[idx].push_back(make_record(spec, M, Mc, res.report.iterations[static_cast<std::size_t>(spec.iterations[idx])]));
        }
      }
      for (auto& group : by_k) records.insert(records.end(), group.begin(), group.end());
      break;
    }
    case Family::Single: {
      if (spec.mode == Mode::Parareal) {
        const int M = spec.fine_degrees.front();
        const int Mc = spec.coarse_degrees.front();
        const auto res = run(M, Mc, spec.iterations.front(), spec.stop_tol);
        for (const auto& it : res.report.iterations) records.push_back(make_record(spec, M, Mc, it));
        break;
      }
      const bool fine = spec.mode == Mode::SequentialFine;
      const int M = spec.fine_degrees.empty() ? 0 : spec.fine_degrees.front();
      const int Mc = spec.coarse_degrees.empty() ? 0 : spec.coarse_degrees.front();
      const auto start = Clock::now();
      const auto seq = sequential_solve(*cache.get(fine ? M : Mc), spec.linear);
      IterationRecord it;
      it.elapsed_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
      (fine ? it.fine_sweeps : it.coarse_sweeps) = seq.sweeps;
      if (monitor) it.linf_error = monitor(seq.solution);
      records.push_back(make_record(spec, M, Mc, it));
      break;
    }
  }

  write_outputs(spec, records);
  return records;
}

SlopeFit fit_coarse_slope(std::span<const ErrorRecord> records, int k, double floor, double ceiling) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (const auto& r : records) {
    if (r.k != k || !(r.linf_error >= 100.0 * floor) || !(r.linf_error <= ceiling) || !(r.linf_error > 0.0)) {
      continue;
    }
    const double x = r.Mc;
    const double y = std::log10(r.linf_error);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  SlopeFit fit;
  fit.k = k;
  fit.points = count;
  if (count < 2) {
    fit.slope = fit.c = std::numeric_limits<double>::quiet_NaN();
    return fit;
  }
  fit.slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  fit.c = -fit.slope / ((k + 1) * std::numbers::log10e);
  return fit;
}

}  // namespace vie::bench
