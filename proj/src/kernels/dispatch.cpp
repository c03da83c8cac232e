#include <atomic>
#include <cstdlib>
#include <string>

#include "vie/error.hpp"
#include "vie/kernels.hpp"

namespace vie {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidInterval: return "invalid-interval";
    case ErrorKind::DimensionError: return "dimension-error";
    case ErrorKind::IndexError: return "index-error";
    case ErrorKind::DomainError: return "domain-error";
    case ErrorKind::SingularSystem: return "singular-system";
    case ErrorKind::NoConvergence: return "no-convergence";
    case ErrorKind::UnknownProblem: return "unknown-problem";
    case ErrorKind::InvalidProblem: return "invalid-problem";
    case ErrorKind::NotApplicable: return "not-applicable";
    case ErrorKind::NotConverged: return "not-converged";
    case ErrorKind::Divergence: return "divergence";
    case ErrorKind::InvalidConfig: return "invalid-config";
    case ErrorKind::SpecError: return "spec-error";
    case ErrorKind::IoError: return "io-error";
    case ErrorKind::InternalFailure: return "internal-failure";
  }
  return "unknown";
}

namespace kernels {

std::string_view to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

bool isa_available(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2:
#if defined(__x86_64__) || defined(_M_X64)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::Neon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Isa detect_isa() noexcept {
  if (const char* env = std::getenv("VIE_PARAREAL_SIMD"); env != nullptr && std::string(env) == "scalar") {
    return Isa::Scalar;
  }
  if (isa_available(Isa::Avx2)) return Isa::Avx2;
  if (isa_available(Isa::Neon)) return Isa::Neon;
  return Isa::Scalar;
}

namespace {

const KernelTable& table_for(Isa isa) noexcept {
  switch (isa) {
#if defined(__x86_64__) || defined(_M_X64)
    case Isa::Avx2: return avx2_table();
#endif
#if defined(__aarch64__)
    case Isa::Neon: return neon_table();
#endif
    default: return scalar_table();
  }
}

std::atomic<const KernelTable*>& slot() noexcept {
  static std::atomic<const KernelTable*> current{&table_for(detect_isa())};
  return current;
}

}  // namespace

const KernelTable& active() noexcept { return *slot().load(std::memory_order_acquire); }

void set_active(Isa isa) {
  if (!isa_available(isa)) {
    throw Error(ErrorKind::InvalidConfig, std::string("ISA not available: ") + std::string(to_string(isa)));
  }
  slot().store(&table_for(isa), std::memory_order_release);
}

}  // namespace kernels
}  // namespace vie
