#include "vie/collocation.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <utility>

#include "vie/error.hpp"
#include "vie/kernels.hpp"

namespace vie {

// ---------------------------------------------------------------------------
// Partition

Partition::Partition(int count, double horizon) : count_(count), horizon_(horizon), step_(0.0) {
  if (count < 1) throw Error(ErrorKind::InvalidConfig, "partition needs at least one subinterval");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw Error(ErrorKind::InvalidConfig, "partition horizon must be positive and finite");
  }
  step_ = horizon / count;
  breakpoints_.resize(static_cast<std::size_t>(count) + 1);
  for (int n = 0; n < count; ++n) breakpoints_[static_cast<std::size_t>(n)] = n * step_;
  breakpoints_.back() = horizon;
}

int Partition::locate(double t) const {
  if (!(t >= 0.0 && t <= horizon_)) {
    std::ostringstream msg;
    msg << "t=" << t << " outside [0, " << horizon_ << "]";
    throw Error(ErrorKind::DomainError, msg.str());
  }
  const auto it = std::lower_bound(breakpoints_.begin() + 1, breakpoints_.end(), t);
  return static_cast<int>(it - breakpoints_.begin());
}

// ---------------------------------------------------------------------------
// CollocationGrid

CollocationGrid::CollocationGrid(const Partition& partition, const gl::QuadratureRule& rule)
    : partition_(partition), rule_(rule) {
  const std::size_t m1 = rule_.size();
  const auto x = rule_.nodes();

  nodes_.resize(static_cast<std::size_t>(partition_.count()) * m1);
  for (int n = 1; n <= partition_.count(); ++n) {
    const double a = partition_.breakpoint(n - 1);
    const double b = partition_.breakpoint(n);
    for (std::size_t i = 0; i < m1; ++i) nodes_[(n - 1) * m1 + i] = gl::map_point(x[i], a, b);
  }

  inner_basis_.resize(m1 * m1 * m1);
  for (std::size_t i = 0; i < m1; ++i) {
    for (std::size_t q = 0; q < m1; ++q) {
      const double y = -1.0 + 0.5 * (x[i] + 1.0) * (x[q] + 1.0);
      gl::basis_values(x, rule_.bary_weights(), y, std::span<double>(inner_basis_.data() + (i * m1 + q) * m1, m1));
    }
  }
}

std::shared_ptr<const CollocationGrid> CollocationGrid::create(const Partition& partition,
                                                               const gl::QuadratureRule& rule) {
  return std::make_shared<const CollocationGrid>(partition, rule);
}

std::span<const double> CollocationGrid::nodes(int n) const {
  if (n < 1 || n > partition_.count()) {
    throw Error(ErrorKind::IndexError, "block index " + std::to_string(n) + " outside 1.." +
                                           std::to_string(partition_.count()));
  }
  return {nodes_.data() + static_cast<std::size_t>(n - 1) * block_size(), block_size()};
}

std::span<const double> CollocationGrid::inner_basis(std::size_t i) const {
  const std::size_t m1 = block_size();
  return {inner_basis_.data() + i * m1 * m1, m1 * m1};
}

// ---------------------------------------------------------------------------
// NodalSolution

NodalSolution::NodalSolution(GridPtr grid) : grid_(std::move(grid)) {
  values_.assign(static_cast<std::size_t>(grid_->block_count()) * grid_->block_size(), 0.0);
}

std::span<double> NodalSolution::block(int n) {
  if (n < 1 || n > block_count()) throw Error(ErrorKind::IndexError, "block index " + std::to_string(n));
  const std::size_t m1 = grid_->block_size();
  return {values_.data() + static_cast<std::size_t>(n - 1) * m1, m1};
}

std::span<const double> NodalSolution::block(int n) const {
  if (n < 1 || n > block_count()) throw Error(ErrorKind::IndexError, "block index " + std::to_string(n));
  const std::size_t m1 = grid_->block_size();
  return {values_.data() + static_cast<std::size_t>(n - 1) * m1, m1};
}

// ---------------------------------------------------------------------------
// Assembly

namespace {

void check_block_index(const CollocationGrid& grid, int n) {
  if (n < 1 || n > grid.block_count()) {
    throw Error(ErrorKind::IndexError, "block index " + std::to_string(n) + " outside 1.." +
                                           std::to_string(grid.block_count()));
  }
}

}  // namespace

DenseMatrix assemble_matrix(const VolterraProblem& problem, const CollocationGrid& grid, int n) {
  check_block_index(grid, n);
  const std::size_t m1 = grid.block_size();
  const auto x = grid.rule().nodes();
  const auto w = grid.rule().weights();
  const auto xi = grid.nodes(n);
  const double left = grid.partition().breakpoint(n - 1);

  DenseMatrix matrix(m1);
  for (std::size_t i = 0; i < m1; ++i) {
    const double half = 0.5 * (xi[i] - left);
    const auto table = grid.inner_basis(i);
    auto row = matrix.row(i);
    for (std::size_t q = 0; q < m1; ++q) {
      const double s = left + half * (x[q] + 1.0);
      const double c = w[q] * half * problem.kernel(xi[i], s);
      kernels::axpy(-c, table.subspan(q * m1, m1), row);
    }
    row[i] += 1.0;
  }
  return matrix;
}

std::vector<double> history_rhs(const VolterraProblem& problem, const CollocationGrid& grid, int n,
                                const NodalSolution& history) {
  check_block_index(grid, n);
  if (history.degree() != grid.degree()) {
    throw Error(ErrorKind::DimensionError, "history degree " + std::to_string(history.degree()) +
                                               " does not match rule degree " + std::to_string(grid.degree()));
  }
  if (history.block_count() < n - 1) {
    throw Error(ErrorKind::DimensionError, "history has too few blocks for block " + std::to_string(n));
  }
  const std::size_t m1 = grid.block_size();
  const auto w = grid.rule().weights();
  const auto xi = grid.nodes(n);
  const double half_step = 0.5 * grid.partition().step();

  std::vector<double> rhs(m1);
  for (std::size_t i = 0; i < m1; ++i) {
    double memory = 0.0;
    for (int j = 1; j < n; ++j) {
      const auto sj = history.grid().nodes(j);
      const auto uj = history.block(j);
      double panel = 0.0;
      for (std::size_t q = 0; q < m1; ++q) panel += w[q] * problem.kernel(xi[i], sj[q]) * uj[q];
      memory += panel;
    }
    rhs[i] = problem.source(xi[i]) + half_step * memory;
  }
  return rhs;
}

// ---------------------------------------------------------------------------
// Linear solves

namespace {

double relative_residual(const DenseMatrix& a, std::span<const double> f, std::span<const double> p, double scale) {
  double r = 0.0;
  for (std::size_t i = 0; i < a.n; ++i) {
    const double d = std::abs(kernels::dot(a.row(i), p) - f[i]);
    if (std::isnan(d)) return d;
    if (d > r) r = d;
  }
  return r / scale;
}

std::vector<double> direct_solve(const DenseMatrix& a, std::span<const double> f) {
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const auto n = static_cast<Eigen::Index>(a.n);
  const Eigen::Map<const RowMajor> map(a.data.data(), n, n);
  const Eigen::PartialPivLU<RowMajor> lu(map);
  const auto diag = lu.matrixLU().diagonal().cwiseAbs();
  if (n > 0 && (!(diag.minCoeff() > 1e-14 * diag.maxCoeff()) || !std::isfinite(diag.maxCoeff()))) {
    throw Error(ErrorKind::SingularSystem, "collocation matrix is numerically singular");
  }
  const Eigen::Map<const Eigen::VectorXd> rhs(f.data(), n);
  const Eigen::VectorXd x = lu.solve(rhs);
  return std::vector<double>(x.data(), x.data() + n);
}

LocalSolveResult solve_system(const DenseMatrix& a, std::span<const double> f,
                              std::optional<std::span<const double>> warm_start, const LinearSolveConfig& config) {
  if (f.size() != a.n) throw Error(ErrorKind::DimensionError, "right-hand side length does not match matrix");
  if (warm_start && warm_start->size() != a.n) {
    throw Error(ErrorKind::DimensionError, "warm start length does not match matrix");
  }
  if (!(config.tolerance > 0.0)) throw Error(ErrorKind::InvalidConfig, "linear tolerance must be positive");

  LocalSolveResult result;
  result.solution = warm_start ? std::vector<double>(warm_start->begin(), warm_start->end())
                               : std::vector<double>(a.n, 0.0);
  auto& p = result.solution;

  double fmax = 0.0;
  for (double v : f) fmax = std::max(fmax, std::abs(v));
  const double scale = std::max(1.0, fmax);

  if (relative_residual(a, f, p, scale) <= config.tolerance) return result;

  while (result.sweeps < config.max_sweeps) {
    ++result.sweeps;
    for (std::size_t i = 0; i < a.n; ++i) {
      const double off = kernels::dot(a.row(i), p) - a(i, i) * p[i];
      p[i] = (f[i] - off) / a(i, i);
    }
    const double r = relative_residual(a, f, p, scale);
    if (r <= config.tolerance) return result;
    if (!std::isfinite(r)) break;
  }

  if (!config.fallback) {
    throw Error(ErrorKind::NoConvergence,
                "Gauss-Seidel did not converge in " + std::to_string(config.max_sweeps) + " sweeps");
  }
  result.solution = direct_solve(a, f);
  result.used_direct = true;
  return result;
}

}  // namespace

LocalSolveResult local_solve(const LocalSystem& system, std::optional<std::span<const double>> warm_start,
                             const LinearSolveConfig& config) {
  if (system.matrix.data.size() != system.matrix.n * system.matrix.n) {
    throw Error(ErrorKind::DimensionError, "matrix storage is not square");
  }
  return solve_system(system.matrix, system.rhs, warm_start, config);
}

// ---------------------------------------------------------------------------
// Propagator

Propagator::Propagator(const VolterraProblem& problem, GridPtr grid) : grid_(std::move(grid)) {
  const int count = grid_->block_count();
  const std::size_t m1 = grid_->block_size();
  const auto w = grid_->rule().weights();
  const double half_step = 0.5 * grid_->partition().step();

  matrices_.reserve(static_cast<std::size_t>(count));
  source_.reserve(static_cast<std::size_t>(count));
  memory_.reserve(static_cast<std::size_t>(count));
  for (int n = 1; n <= count; ++n) {
    matrices_.push_back(assemble_matrix(problem, *grid_, n));
    const auto xi = grid_->nodes(n);

    std::vector<double> g(m1);
    for (std::size_t i = 0; i < m1; ++i) g[i] = problem.source(xi[i]);
    source_.push_back(std::move(g));

    const std::size_t cols = static_cast<std::size_t>(n - 1) * m1;
    std::vector<double> mem(m1 * cols);
    for (std::size_t i = 0; i < m1; ++i) {
      for (int j = 1; j < n; ++j) {
        const auto sj = grid_->nodes(j);
        for (std::size_t q = 0; q < m1; ++q) {
          mem[i * cols + static_cast<std::size_t>(j - 1) * m1 + q] = half_step * w[q] * problem.kernel(xi[i], sj[q]);
        }
      }
    }
    memory_.push_back(std::move(mem));
  }
}

const DenseMatrix& Propagator::matrix(int n) const {
  check_block_index(*grid_, n);
  return matrices_[static_cast<std::size_t>(n - 1)];
}

std::vector<double> Propagator::rhs(int n, std::span<const double> history) const {
  check_block_index(*grid_, n);
  const std::size_t m1 = grid_->block_size();
  const std::size_t cols = static_cast<std::size_t>(n - 1) * m1;
  if (history.size() < cols) throw Error(ErrorKind::DimensionError, "history too short for block " + std::to_string(n));
  const auto& mem = memory_[static_cast<std::size_t>(n - 1)];
  const auto& g = source_[static_cast<std::size_t>(n - 1)];
  const auto hist = history.first(cols);

  std::vector<double> f(m1);
  for (std::size_t i = 0; i < m1; ++i) {
    f[i] = g[i] + kernels::dot(std::span<const double>(mem.data() + i * cols, cols), hist);
  }
  return f;
}

LocalSolveResult Propagator::propagate(int n, std::span<const double> history,
                                       std::optional<std::span<const double>> warm_start,
                                       const LinearSolveConfig& config) const {
  const auto f = rhs(n, history);
  return solve_system(matrix(n), f, warm_start, config);
}

LocalSolveResult propagate(const VolterraProblem& problem, const CollocationGrid& grid, int n,
                           const NodalSolution& history, std::optional<std::span<const double>> warm_start,
                           const LinearSolveConfig& config) {
  LocalSystem system{assemble_matrix(problem, grid, n), history_rhs(problem, grid, n, history)};
  return local_solve(system, warm_start, config);
}

SequentialResult sequential_solve(const Propagator& propagator, const LinearSolveConfig& config) {
  SequentialResult out{NodalSolution(propagator.grid_ptr()), 0};
  auto& sol = out.solution;
  const std::size_t m1 = propagator.grid().block_size();
  for (int n = 1; n <= sol.block_count(); ++n) {
    const auto history = std::span<const double>(sol.values()).first(static_cast<std::size_t>(n - 1) * m1);
    auto res = propagator.propagate(n, history, std::nullopt, config);
    out.sweeps += res.sweeps;
    std::copy(res.solution.begin(), res.solution.end(), sol.block(n).begin());
  }
  return out;
}

NodalSolution sequential_solve(const VolterraProblem& problem, const Partition& partition,
                               const gl::QuadratureRule& rule, const LinearSolveConfig& config) {
  const Propagator propagator(problem, CollocationGrid::create(partition, rule));
  return sequential_solve(propagator, config).solution;
}

// ---------------------------------------------------------------------------
// Resampling and evaluation

TransferOperator::TransferOperator(const gl::QuadratureRule& from, const gl::QuadratureRule& to)
    : from_size_(from.size()), to_size_(to.size()), identity_(from.degree() == to.degree()) {
  if (identity_) return;
  matrix_.resize(to_size_ * from_size_);
  for (std::size_t i = 0; i < to_size_; ++i) {
    gl::basis_values(from.nodes(), from.bary_weights(), to.nodes()[i],
                     std::span<double>(matrix_.data() + i * from_size_, from_size_));
  }
}

void TransferOperator::apply(std::span<const double> src, std::span<double> dst) const {
  if (src.size() != from_size_ || dst.size() != to_size_) {
    throw Error(ErrorKind::DimensionError, "transfer operator size mismatch");
  }
  if (identity_) {
    std::copy(src.begin(), src.end(), dst.begin());
    return;
  }
  for (std::size_t i = 0; i < to_size_; ++i) {
    dst[i] = kernels::dot(std::span<const double>(matrix_.data() + i * from_size_, from_size_), src);
  }
}

NodalSolution resample(const NodalSolution& solution, GridPtr target) {
  const auto& p = solution.partition();
  const auto& q = target->partition();
  if (p.count() != q.count() || p.horizon() != q.horizon()) {
    throw Error(ErrorKind::DimensionError, "resample requires identical partitions");
  }
  NodalSolution out(std::move(target));
  const TransferOperator transfer(solution.grid().rule(), out.grid().rule());
  for (int n = 1; n <= out.block_count(); ++n) transfer.apply(solution.block(n), out.block(n));
  return out;
}

NodalSolution resample(const NodalSolution& solution, const gl::QuadratureRule& target_rule) {
  return resample(solution, CollocationGrid::create(solution.partition(), target_rule));
}

double evaluate(const NodalSolution& solution, double t) {
  const int n = solution.partition().locate(t);
  return gl::barycentric_eval(solution.grid().nodes(n), solution.grid().rule().bary_weights(), solution.block(n), t);
}

}  // namespace vie
