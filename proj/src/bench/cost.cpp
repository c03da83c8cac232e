#include <string>

#include "vie/bench.hpp"
#include "vie/error.hpp"

namespace vie::bench {

CostEstimate speedup_estimate(int N, int M, int Mc, int K) {
  if (N < 1 || M < 1 || Mc < 1 || K < 1 || Mc >= M) {
    throw Error(ErrorKind::SpecError, "speedup_estimate needs positive N, M, Mc, K with Mc < M (got N=" +
                                          std::to_string(N) + " M=" + std::to_string(M) + " Mc=" +
                                          std::to_string(Mc) + " K=" + std::to_string(K) + ")");
  }
  const double n = N, m = M, mc = Mc, k = K;
  CostEstimate est{N, M, Mc, K, 0.0, 0.0, 0.0, 0.0};
  est.sequential_cost = n * m * m * m;
  est.parareal_cost = k * (n * mc * mc + n * m * mc + m * m + n * m * mc);
  est.speedup = est.sequential_cost / est.parareal_cost;
  est.asymptotic_bound = 1.0 / (k * mc * mc / (m * m * m) + k * mc / (m * m) + k / (n * m));
  return est;
}

}  // namespace vie::bench
