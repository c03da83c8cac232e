#include "vie/parareal.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>
#include <utility>

#include "vie/error.hpp"
#include "vie/kernels.hpp"
#include "vie/parallel.hpp"

namespace vie {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void check_finite(std::span<const double> block, int n, int k) {
  for (double v : block) {
    if (!std::isfinite(v)) {
      throw Error(ErrorKind::Divergence,
                  "non-finite value in block " + std::to_string(n) + " at iteration " + std::to_string(k));
    }
  }
}

std::span<const double> prefix(const NodalSolution& sol, int n) {
  return std::span<const double>(sol.values()).first(static_cast<std::size_t>(n - 1) * sol.grid().block_size());
}

}  // namespace

void PararealConfig::validate() const {
  if (coarse_degree < 1) throw Error(ErrorKind::InvalidConfig, "coarse degree must be at least 1");
  if (coarse_degree > fine_degree || (coarse_degree == fine_degree && !allow_equal_degrees)) {
    throw Error(ErrorKind::InvalidConfig, "coarse degree " + std::to_string(coarse_degree) +
                                              " must be below fine degree " + std::to_string(fine_degree));
  }
  if (max_iters < 0) throw Error(ErrorKind::InvalidConfig, "max_iters must be non-negative");
  if (!(stop_tol >= 0.0)) throw Error(ErrorKind::InvalidConfig, "stop_tol must be non-negative");
  if (!(linear.tolerance > 0.0) || linear.max_sweeps < 1) {
    throw Error(ErrorKind::InvalidConfig, "linear solver needs a positive tolerance and sweep budget");
  }
}

PararealSolver::PararealSolver(const VolterraProblem& problem, const Partition& partition, PararealConfig config)
    : config_((config.validate(), config)),
      restrict_(gl::compute_rule(config.fine_degree), gl::compute_rule(config.coarse_degree)),
      prolong_(gl::compute_rule(config.coarse_degree), gl::compute_rule(config.fine_degree)) {
  const auto start = Clock::now();
  const auto fine_rule = gl::compute_rule(config_.fine_degree);
  fine_ = std::make_shared<const Propagator>(problem, CollocationGrid::create(partition, fine_rule));
  if (config_.coarse_degree == config_.fine_degree) {
    coarse_ = fine_;
  } else {
    const auto coarse_rule = gl::compute_rule(config_.coarse_degree);
    coarse_ = std::make_shared<const Propagator>(problem, CollocationGrid::create(partition, coarse_rule));
  }
  setup_ms_ = ms_since(start);
}

PararealSolver::PararealSolver(std::shared_ptr<const Propagator> fine, std::shared_ptr<const Propagator> coarse,
                               PararealConfig config)
    : config_((config.validate(), config)),
      fine_(std::move(fine)),
      coarse_(std::move(coarse)),
      restrict_(fine_->grid().rule(), coarse_->grid().rule()),
      prolong_(coarse_->grid().rule(), fine_->grid().rule()) {
  if (fine_->grid().degree() != config_.fine_degree || coarse_->grid().degree() != config_.coarse_degree) {
    throw Error(ErrorKind::InvalidConfig, "propagator degrees do not match the parareal config");
  }
  const auto& pf = fine_->grid().partition();
  const auto& pc = coarse_->grid().partition();
  if (pf.count() != pc.count() || pf.horizon() != pc.horizon()) {
    throw Error(ErrorKind::InvalidConfig, "fine and coarse propagators use different partitions");
  }
}

unsigned PararealSolver::worker_count() const {
  if (!config_.parallel) return 1;
  return config_.threads > 0 ? config_.threads : default_thread_count();
}

PararealState PararealSolver::init(StageTimes* times) const {
  const auto start = Clock::now();
  NodalSolution coarse_sol(coarse_->grid_ptr());
  NodalSolution fine_sol(fine_->grid_ptr());
  long sweeps = 0;
  for (int n = 1; n <= coarse_sol.block_count(); ++n) {
    auto res = coarse_->propagate(n, prefix(coarse_sol, n), std::nullopt, config_.linear);
    check_finite(res.solution, n, 0);
    sweeps += res.sweeps;
    std::copy(res.solution.begin(), res.solution.end(), coarse_sol.block(n).begin());
    prolong_.apply(coarse_sol.block(n), fine_sol.block(n));
  }
  if (times != nullptr) *times = StageTimes{0.0, ms_since(start)};
  PararealState state{0, fine_sol, fine_sol, {}, 0, sweeps};
  return state;
}

void PararealSolver::iterate_once(PararealState& state, StageTimes* times) const {
  const int count = state.current.block_count();
  const int k = state.k + 1;
  const NodalSolution& prev = state.current;  // U^{k-1}, frozen during the correction stage

  // Correction stage: C_n = F_n(U^{k-1}) - G_n(U^{k-1}), independent over n.
  auto start = Clock::now();
  NodalSolution correction(fine_->grid_ptr());
  std::vector<int> fine_sweeps(static_cast<std::size_t>(count), 0);
  parallel_for(static_cast<std::size_t>(count), worker_count(), [&](std::size_t idx) {
    const int n = static_cast<int>(idx) + 1;
    auto res = fine_->propagate(n, prefix(prev, n), prev.block(n), config_.linear);
    check_finite(res.solution, n, k);
    fine_sweeps[idx] = res.sweeps;
    auto out = correction.block(n);
    const auto g_prev = state.coarse_prev.block(n);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = res.solution[i] - g_prev[i];
  });
  const double correction_ms = ms_since(start);

  // Prediction stage: sequential coarse sweep over the updated blocks.
  start = Clock::now();
  NodalSolution next(fine_->grid_ptr());
  NodalSolution coarse_now(fine_->grid_ptr());
  NodalSolution coarse_history(coarse_->grid_ptr());
  std::vector<double> warm(coarse_->grid().block_size());
  long coarse_sweeps = 0;
  for (int n = 1; n <= count; ++n) {
    restrict_.apply(prev.block(n), warm);
    auto res = coarse_->propagate(n, prefix(coarse_history, n), std::span<const double>(warm), config_.linear);
    coarse_sweeps += res.sweeps;
    auto g = coarse_now.block(n);
    prolong_.apply(res.solution, g);
    auto u = next.block(n);
    const auto c = correction.block(n);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = g[i] + c[i];
    check_finite(u, n, k);
    restrict_.apply(u, coarse_history.block(n));
  }
  const double prediction_ms = ms_since(start);

  const double increment = kernels::max_abs_diff(next.values(), prev.values());
  for (int s : fine_sweeps) state.fine_sweeps += s;
  state.coarse_sweeps += coarse_sweeps;
  state.increments.push_back(increment);
  state.current = std::move(next);
  state.coarse_prev = std::move(coarse_now);
  state.k = k;
  if (times != nullptr) *times = StageTimes{correction_ms, prediction_ms};
}

PararealResult PararealSolver::run(const SolutionMonitor& monitor) const {
  const auto start = Clock::now();
  PararealReport report;
  report.setup_ms = setup_ms_;

  StageTimes times;
  PararealState state = init(&times);
  auto record = [&](double increment) {
    IterationRecord rec;
    rec.k = state.k;
    rec.increment = increment;
    rec.correction_ms = times.correction_ms;
    rec.prediction_ms = times.prediction_ms;
    rec.fine_sweeps = state.fine_sweeps;
    rec.coarse_sweeps = state.coarse_sweeps;
    if (monitor) rec.linf_error = monitor(state.current);
    rec.elapsed_ms = setup_ms_ + ms_since(start);
    report.iterations.push_back(rec);
  };
  record(0.0);

  while (state.k < config_.max_iters) {
    iterate_once(state, &times);
    const double increment = state.increments.back();
    record(increment);
    if (config_.stop_tol > 0.0 && increment <= config_.stop_tol) {
      report.converged = true;
      break;
    }
  }
  return PararealResult{std::move(state.current), std::move(report)};
}

PararealResult run_parareal(const VolterraProblem& problem, const Partition& partition, const PararealConfig& config,
                            const SolutionMonitor& monitor) {
  return PararealSolver(problem, partition, config).run(monitor);
}

double fixed_point_gap(const VolterraProblem& problem, const Partition& partition, const PararealConfig& config) {
  const PararealSolver solver(problem, partition, config);
  const auto result = solver.run();
  if (!result.report.converged) {
    throw Error(ErrorKind::NotConverged, "parareal stopped at k=" + std::to_string(result.report.iterations.back().k) +
                                             " without reaching stop_tol");
  }
  const auto sequential = sequential_solve(solver.fine(), config.linear);
  return kernels::max_abs_diff(result.solution.values(), sequential.solution.values());
}

}  // namespace vie
