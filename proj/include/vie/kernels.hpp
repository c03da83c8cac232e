#pragma once

// Dense inner-loop kernels. Each has a scalar reference implementation and,
// where the CPU allows it, a vectorized variant selected once at startup.
// Callers go through the free functions below, which forward to the active set.

#include <cstddef>
#include <span>
#include <string_view>

namespace vie::kernels {

enum class Isa { Scalar, Avx2, Neon };

std::string_view to_string(Isa isa) noexcept;

struct BarySums {
  double numerator;
  double denominator;
};

struct KernelTable {
  Isa isa;
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // sum_i a[i] * b[i] * c[i]
  double (*dot3)(const double* a, const double* b, const double* c, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // max_i |a[i] - b[i]|
  double (*max_abs_diff)(const double* a, const double* b, std::size_t n);
  // sum_j w[j] f[j] / (x - z[j]) and sum_j w[j] / (x - z[j]); x must not equal any z[j]
  BarySums (*bary_sums)(const double* z, const double* w, const double* f, std::size_t n, double x);
};

const KernelTable& scalar_table() noexcept;
#if defined(__x86_64__) || defined(_M_X64)
const KernelTable& avx2_table() noexcept;
#endif
#if defined(__aarch64__)
const KernelTable& neon_table() noexcept;
#endif

/// Best ISA the running CPU supports. `VIE_PARAREAL_SIMD=scalar` in the
/// environment pins the scalar path.
Isa detect_isa() noexcept;
bool isa_available(Isa isa) noexcept;

/// Active table. Switching is meant for tests and benchmarks, not for use
/// while another thread is inside a kernel.
const KernelTable& active() noexcept;
void set_active(Isa isa);

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}
inline double dot3(std::span<const double> a, std::span<const double> b, std::span<const double> c) {
  return active().dot3(a.data(), b.data(), c.data(), a.size());
}
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy(alpha, x.data(), y.data(), x.size());
}
inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  return active().max_abs_diff(a.data(), b.data(), a.size());
}
inline BarySums bary_sums(std::span<const double> z, std::span<const double> w,
                          std::span<const double> f, double x) {
  return active().bary_sums(z.data(), w.data(), f.data(), z.size(), x);
}

}  // namespace vie::kernels
