#pragma once

// Legendre-Gauss collocation on a uniform partition of [0, T]. A degree-M
// piecewise polynomial is stored by its values at the mapped LG nodes of each
// subinterval; block n (1-based) owns I_n = [t_{n-1}, t_n].

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "vie/gauss_legendre.hpp"
#include "vie/problem.hpp"

namespace vie {

class Partition {
 public:
  /// Throws InvalidConfig unless count >= 1 and horizon > 0.
  Partition(int count, double horizon);

  [[nodiscard]] int count() const noexcept { return count_; }
  [[nodiscard]] double horizon() const noexcept { return horizon_; }
  [[nodiscard]] double step() const noexcept { return step_; }
  /// t_n for n = 0..N; t_N is the horizon exactly.
  [[nodiscard]] double breakpoint(int n) const noexcept { return breakpoints_[static_cast<std::size_t>(n)]; }
  [[nodiscard]] std::span<const double> breakpoints() const noexcept { return breakpoints_; }
  /// Block owning t: breakpoints belong to the block on their left, t = 0 to block 1.
  /// Throws DomainError outside [0, T].
  [[nodiscard]] int locate(double t) const;

 private:
  int count_;
  double horizon_;
  double step_;
  std::vector<double> breakpoints_;
};

/// Row-major dense square matrix.
struct DenseMatrix {
  std::size_t n = 0;
  std::vector<double> data;

  DenseMatrix() = default;
  explicit DenseMatrix(std::size_t size) : n(size), data(size * size, 0.0) {}

  [[nodiscard]] double& operator()(std::size_t i, std::size_t j) { return data[i * n + j]; }
  [[nodiscard]] double operator()(std::size_t i, std::size_t j) const { return data[i * n + j]; }
  [[nodiscard]] std::span<double> row(std::size_t i) { return {data.data() + i * n, n}; }
  [[nodiscard]] std::span<const double> row(std::size_t i) const { return {data.data() + i * n, n}; }
};

/// A partition together with an LG rule: mapped nodes for every block and the
/// reference-coordinate basis table used by matrix assembly.
class CollocationGrid {
 public:
  static std::shared_ptr<const CollocationGrid> create(const Partition& partition, const gl::QuadratureRule& rule);

  [[nodiscard]] const Partition& partition() const noexcept { return partition_; }
  [[nodiscard]] const gl::QuadratureRule& rule() const noexcept { return rule_; }
  [[nodiscard]] int degree() const noexcept { return rule_.degree(); }
  [[nodiscard]] std::size_t block_size() const noexcept { return rule_.size(); }
  [[nodiscard]] int block_count() const noexcept { return partition_.count(); }
  /// Mapped nodes xi_n^i of block n.
  [[nodiscard]] std::span<const double> nodes(int n) const;
  [[nodiscard]] std::span<const double> all_nodes() const noexcept { return nodes_; }
  /// h_j(y_{iq}) for the inner quadrature points of collocation row i, as a
  /// (q, j) row-major table; y_{iq} = -1 + (x_i + 1)(x_q + 1)/2.
  [[nodiscard]] std::span<const double> inner_basis(std::size_t i) const;

  CollocationGrid(const Partition& partition, const gl::QuadratureRule& rule);

 private:
  Partition partition_;
  gl::QuadratureRule rule_;
  std::vector<double> nodes_;
  std::vector<double> inner_basis_;
};

using GridPtr = std::shared_ptr<const CollocationGrid>;

class NodalSolution {
 public:
  /// Zero-filled solution on the grid.
  explicit NodalSolution(GridPtr grid);

  [[nodiscard]] const CollocationGrid& grid() const noexcept { return *grid_; }
  [[nodiscard]] const GridPtr& grid_ptr() const noexcept { return grid_; }
  [[nodiscard]] const Partition& partition() const noexcept { return grid_->partition(); }
  [[nodiscard]] int degree() const noexcept { return grid_->degree(); }
  [[nodiscard]] int block_count() const noexcept { return grid_->block_count(); }
  [[nodiscard]] std::span<double> block(int n);
  [[nodiscard]] std::span<const double> block(int n) const;
  /// All blocks, contiguous in block order.
  [[nodiscard]] std::span<double> values() noexcept { return values_; }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

struct LocalSystem {
  DenseMatrix matrix;       // I - A
  std::vector<double> rhs;  // f
};

struct LinearSolveConfig {
  double tolerance = 1e-13;  // on ||(I-A)p - f||_inf / max(1, ||f||_inf)
  int max_sweeps = 200;
  bool fallback = true;  // LU with partial pivoting after max_sweeps
};

struct LocalSolveResult {
  std::vector<double> solution;
  int sweeps = 0;
  bool used_direct = false;
};

/// Entry (i, j) = delta_ij - sum_q w_q Kbar(xi_i, s_i(x_q)) h_j(s_i(x_q)) on block n.
/// Throws IndexError for n outside 1..N.
DenseMatrix assemble_matrix(const VolterraProblem& problem, const CollocationGrid& grid, int n);

/// g(xi_n^i) plus the memory term over blocks 1..n-1 of `history`.
/// Throws DimensionError if the history degree differs from the grid degree or
/// the history has fewer than n-1 blocks.
std::vector<double> history_rhs(const VolterraProblem& problem, const CollocationGrid& grid, int n,
                                const NodalSolution& history);

/// Gauss-Seidel from `warm_start` (zero when absent) with optional direct fallback.
/// Throws DimensionError, SingularSystem, or NoConvergence.
LocalSolveResult local_solve(const LocalSystem& system, std::optional<std::span<const double>> warm_start,
                             const LinearSolveConfig& config);

/// Precomputed per-block operators for one (problem, grid) pair: the
/// collocation matrices, source samples and memory-term kernel samples. Const
/// methods are safe to call concurrently.
class Propagator {
 public:
  Propagator(const VolterraProblem& problem, GridPtr grid);

  [[nodiscard]] const CollocationGrid& grid() const noexcept { return *grid_; }
  [[nodiscard]] const GridPtr& grid_ptr() const noexcept { return grid_; }

  /// `history` holds blocks 1..n-1 contiguously (a prefix of NodalSolution::values()).
  [[nodiscard]] std::vector<double> rhs(int n, std::span<const double> history) const;
  [[nodiscard]] const DenseMatrix& matrix(int n) const;

  [[nodiscard]] LocalSolveResult propagate(int n, std::span<const double> history,
                                           std::optional<std::span<const double>> warm_start,
                                           const LinearSolveConfig& config) const;

 private:
  GridPtr grid_;
  std::vector<DenseMatrix> matrices_;
  std::vector<std::vector<double>> source_;
  // Block n: (M+1) rows of (n-1)(M+1) entries, (dt/2) w_q K(xi_n^i, xi_j^q).
  std::vector<std::vector<double>> memory_;
};

/// One collocation solve on block n, assembled from scratch.
LocalSolveResult propagate(const VolterraProblem& problem, const CollocationGrid& grid, int n,
                           const NodalSolution& history, std::optional<std::span<const double>> warm_start,
                           const LinearSolveConfig& config = {});

struct SequentialResult {
  NodalSolution solution;
  long sweeps = 0;
};

/// Propagates n = 1..N in order, each block consuming all earlier ones.
SequentialResult sequential_solve(const Propagator& propagator, const LinearSolveConfig& config = {});
NodalSolution sequential_solve(const VolterraProblem& problem, const Partition& partition,
                               const gl::QuadratureRule& rule, const LinearSolveConfig& config = {});

/// Interpolation matrix between two LG rules in reference coordinates.
class TransferOperator {
 public:
  TransferOperator(const gl::QuadratureRule& from, const gl::QuadratureRule& to);

  [[nodiscard]] std::size_t from_size() const noexcept { return from_size_; }
  [[nodiscard]] std::size_t to_size() const noexcept { return to_size_; }
  /// dst[i] = sum_j src[j] h_j(x_i^to). Identity copy when both rules agree.
  void apply(std::span<const double> src, std::span<double> dst) const;

 private:
  std::size_t from_size_;
  std::size_t to_size_;
  bool identity_;
  std::vector<double> matrix_;
};

/// Per-block barycentric resampling onto `target` (same partition required).
NodalSolution resample(const NodalSolution& solution, GridPtr target);
NodalSolution resample(const NodalSolution& solution, const gl::QuadratureRule& target_rule);

/// Pointwise value; see Partition::locate for ownership of breakpoints.
double evaluate(const NodalSolution& solution, double t);

}  // namespace vie
