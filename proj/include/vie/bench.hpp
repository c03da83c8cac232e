#pragma once

// Convergence experiments, cost model, CSV/SVG output and the command-line
// front end.

#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vie/collocation.hpp"
#include "vie/problem.hpp"

namespace vie::bench {

/// Points per subinterval (breakpoints included) added to the fine nodes when
/// measuring L-infinity errors.
inline constexpr int kProbesPerInterval = 101;

/// max |evaluate(solution, t) - exact(t)| over every node of the solution grid
/// and kProbesPerInterval equispaced points per subinterval.
double linf_error(const NodalSolution& solution, const ScalarFn& exact);

struct CostEstimate {
  int N = 0;
  int M = 0;
  int Mc = 0;
  int K = 0;
  double sequential_cost = 0.0;   // N M^3
  double parareal_cost = 0.0;     // K (N Mc^2 + N M Mc + M^2 + N M Mc)
  double speedup = 0.0;           // sequential_cost / parareal_cost
  double asymptotic_bound = 0.0;  // (K Mc^2/M^3 + K Mc/M^2 + K/(N M))^-1
};

/// Unit-constant cost model. Throws SpecError unless all arguments are
/// positive and Mc < M.
CostEstimate speedup_estimate(int N, int M, int Mc, int K);

enum class Family { ErrorVsM, ErrorVsK, ErrorVsMc, Single };
enum class Mode { Parareal, SequentialFine, SequentialCoarse };

std::string_view to_string(Family family) noexcept;
std::string_view to_string(Mode mode) noexcept;
/// Throw SpecError on unknown names.
Family parse_family(std::string_view name);
Mode parse_mode(std::string_view name);

/// Comma list of integers and inclusive a:b or a:b:step ranges, e.g. "4,6:10:2".
/// Throws SpecError.
std::vector<int> parse_int_list(std::string_view text);

struct ExperimentSpec {
  Family family = Family::Single;
  std::string problem;
  double T = 1.0;
  int N = 1;
  // error-vs-M sweeps fine_degrees; error-vs-k and error-vs-Mc sweep coarse_degrees.
  std::vector<int> fine_degrees;
  std::vector<int> coarse_degrees;
  // error-vs-Mc: the k values recorded; otherwise a single iteration cap.
  std::vector<int> iterations;
  Mode mode = Mode::Parareal;  // Single only
  double stop_tol = 1e-12;     // error-vs-M and Single; the k-sweeps never stop early
  LinearSolveConfig linear{};
  bool parallel = true;
  unsigned threads = 0;
  std::string out_path;   // CSV, optional
  std::string plot_path;  // SVG, optional

  /// Throws SpecError.
  void validate() const;
};

struct ErrorRecord {
  std::string experiment;
  std::string problem;
  double T = 0.0;
  int N = 0;
  int M = 0;
  int Mc = 0;
  int k = 0;
  double linf_error = 0.0;
  double increment = 0.0;
  double wall_ms = 0.0;
  long fine_sweeps = 0;
  long coarse_sweeps = 0;

  bool operator==(const ErrorRecord&) const = default;
};

inline constexpr std::string_view kCsvHeader =
    "experiment,problem,T,N,M,Mc,k,linf_error,increment,wall_ms,fine_sweeps,coarse_sweeps";

/// Validates, runs every sweep point sequentially, and writes the CSV and plot
/// when their paths are set.
std::vector<ErrorRecord> run_experiment(const ExperimentSpec& spec);

void write_csv(std::ostream& out, std::span<const ErrorRecord> records);
/// Throws SpecError on a malformed file.
std::vector<ErrorRecord> read_csv(std::istream& in);

/// Self-contained semi-log SVG chart of the records for the given family.
std::string render_svg(Family family, std::span<const ErrorRecord> records);

struct SlopeFit {
  int k = 0;
  int points = 0;
  double slope = 0.0;  // d log10(error) / d Mc
  double c = 0.0;      // -slope / ((k+1) log10 e)
};

/// Least squares on log10(error) against Mc for the records with the given k,
/// keeping errors in [100 floor, ceiling]. A finite ceiling (e.g. the solution's
/// sup norm) drops the unresolved small-Mc regime where the coarse solver diverges.
SlopeFit fit_coarse_slope(std::span<const ErrorRecord> records, int k, double floor,
                          double ceiling = std::numeric_limits<double>::infinity());

/// Entry point of the vie-parareal tool. Returns 0 on success, 2 on usage
/// errors, 1 on runtime failures.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace vie::bench
