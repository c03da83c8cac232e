#pragma once

// Parareal iteration for Volterra equations:
//   U^k_n = G_n(U^k_1..U^k_{n-1}) + F_n(U^{k-1}_1..) - G_n(U^{k-1}_1..),
// with F the degree-M collocation solve and G the degree-Mc one. Iterates live
// on the fine grid; coarse solves see restricted history and their output is
// prolonged before the update.

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "vie/collocation.hpp"
#include "vie/problem.hpp"

namespace vie {

struct PararealConfig {
  int fine_degree = 25;
  int coarse_degree = 13;
  int max_iters = 10;
  double stop_tol = 1e-12;  // on ||U^k - U^{k-1}||_inf; 0 disables early stopping
  LinearSolveConfig linear{};
  bool parallel = true;
  unsigned threads = 0;              // 0: default_thread_count()
  bool allow_equal_degrees = false;  // permits coarse_degree == fine_degree

  /// Throws InvalidConfig.
  void validate() const;
};

struct PararealState {
  int k = 0;
  NodalSolution current;      // U^k, fine grid
  NodalSolution coarse_prev;  // G_n(U^k) prolonged to the fine nodes, reused by the next correction stage
  std::vector<double> increments;
  long fine_sweeps = 0;
  long coarse_sweeps = 0;
};

struct StageTimes {
  double correction_ms = 0.0;
  double prediction_ms = 0.0;
};

struct IterationRecord {
  int k = 0;
  double increment = 0.0;  // 0 for the initial iterate
  std::optional<double> linf_error;
  double correction_ms = 0.0;
  double prediction_ms = 0.0;
  double elapsed_ms = 0.0;  // since the start of run(), including setup
  long fine_sweeps = 0;     // cumulative
  long coarse_sweeps = 0;   // cumulative
};

struct PararealReport {
  std::vector<IterationRecord> iterations;  // iterations[k] describes U^k
  double setup_ms = 0.0;
  bool converged = false;
};

struct PararealResult {
  NodalSolution solution;
  PararealReport report;
};

/// Measures a solution, e.g. its L-infinity error against an exact solution.
using SolutionMonitor = std::function<double(const NodalSolution&)>;

class PararealSolver {
 public:
  PararealSolver(const VolterraProblem& problem, const Partition& partition, PararealConfig config);
  /// Reuses already-built propagators; their degrees must match the config.
  PararealSolver(std::shared_ptr<const Propagator> fine, std::shared_ptr<const Propagator> coarse,
                 PararealConfig config);

  [[nodiscard]] const PararealConfig& config() const noexcept { return config_; }
  [[nodiscard]] const Propagator& fine() const noexcept { return *fine_; }
  [[nodiscard]] const Propagator& coarse() const noexcept { return *coarse_; }

  /// Sequential coarse sweep, prolonged to the fine grid.
  [[nodiscard]] PararealState init(StageTimes* times = nullptr) const;

  /// One parareal step. Throws Divergence if any block becomes non-finite.
  void iterate_once(PararealState& state, StageTimes* times = nullptr) const;

  /// init, then iterate until max_iters or the increment drops to stop_tol.
  [[nodiscard]] PararealResult run(const SolutionMonitor& monitor = {}) const;

 private:
  unsigned worker_count() const;

  PararealConfig config_;
  std::shared_ptr<const Propagator> fine_;
  std::shared_ptr<const Propagator> coarse_;
  TransferOperator restrict_;
  TransferOperator prolong_;
  double setup_ms_ = 0.0;
};

PararealResult run_parareal(const VolterraProblem& problem, const Partition& partition, const PararealConfig& config,
                            const SolutionMonitor& monitor = {});

/// Max nodal difference between a converged parareal run and the sequential
/// fine solution. Throws NotConverged when the run stops above stop_tol.
double fixed_point_gap(const VolterraProblem& problem, const Partition& partition, const PararealConfig& config);

}  // namespace vie
