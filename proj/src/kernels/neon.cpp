#include <arm_neon.h>

#include <cmath>

#include "vie/kernels.hpp"

namespace vie::kernels {
namespace {

double dot(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double s = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double dot3(const double* a, const double* b, const double* c, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    acc = vfmaq_f64(acc, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)), vld1q_f64(c + i));
  }
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) s += a[i] * b[i] * c[i];
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

double max_abs_diff(const double* a, const double* b, std::size_t n) {
  double r = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = std::abs(a[i] - b[i]);
    if (std::isnan(d)) return d;
    if (d > r) r = d;
  }
  return r;
}

BarySums bary_sums(const double* z, const double* w, const double* f, std::size_t n, double x) {
  const float64x2_t vx = vdupq_n_f64(x);
  float64x2_t num = vdupq_n_f64(0.0);
  float64x2_t den = vdupq_n_f64(0.0);
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    const float64x2_t t = vdivq_f64(vld1q_f64(w + j), vsubq_f64(vx, vld1q_f64(z + j)));
    num = vfmaq_f64(num, t, vld1q_f64(f + j));
    den = vaddq_f64(den, t);
  }
  double sn = vaddvq_f64(num);
  double sd = vaddvq_f64(den);
  for (; j < n; ++j) {
    const double t = w[j] / (x - z[j]);
    sn += t * f[j];
    sd += t;
  }
  return {sn, sd};
}

constexpr KernelTable kTable{Isa::Neon, dot, dot3, axpy, max_abs_diff, bary_sums};

}  // namespace

const KernelTable& neon_table() noexcept { return kTable; }

}  // namespace vie::kernels
