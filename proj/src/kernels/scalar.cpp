#include <cmath>

#include "vie/kernels.hpp"

namespace vie::kernels {
namespace {

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double dot3(const double* a, const double* b, const double* c, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i] * c[i];
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double max_abs_diff(const double* a, const double* b, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = std::abs(a[i] - b[i]);
    if (std::isnan(d)) return d;
    if (d > m) m = d;
  }
  return m;
}

BarySums bary_sums(const double* z, const double* w, const double* f, std::size_t n, double x) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double t = w[j] / (x - z[j]);
    num += t * f[j];
    den += t;
  }
  return {num, den};
}

constexpr KernelTable kTable{Isa::Scalar, dot, dot3, axpy, max_abs_diff, bary_sums};

}  // namespace

const KernelTable& scalar_table() noexcept { return kTable; }

}  // namespace vie::kernels
