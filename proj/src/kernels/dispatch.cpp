// SPDX-License-Identifier: Apache-2.0
#include <atomic>
#include <cstdlib>

#include "ncw/kernels.hpp"

namespace ncw::kernels {
namespace {

Isa detect() {
  if (const char* env = std::getenv("NCW_FORCE_SCALAR"); env && *env && *env != '0')
    return Isa::Scalar;
#if defined(__x86_64__) || defined(_M_X64)
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return Isa::Avx2;
#elif defined(__aarch64__)
  return Isa::Neon;
#endif
  return Isa::Scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
    case Isa::Scalar: break;
  }
  return "scalar";
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2:
#if defined(__x86_64__) || defined(_M_X64)
      __builtin_cpu_init();
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

void force_isa(Isa isa) {
  current().store(isa_supported(isa) ? isa : Isa::Scalar, std::memory_order_relaxed);
}

#if defined(__x86_64__) || defined(_M_X64)
#define NCW_DISPATCH(fn, ...)                                \
  switch (active_isa()) {                                    \
    case Isa::Avx2: return avx2::fn(__VA_ARGS__);            \
    default: return scalar::fn(__VA_ARGS__);                 \
  }
#elif defined(__aarch64__)
#define NCW_DISPATCH(fn, ...)                                \
  switch (active_isa()) {                                    \
    case Isa::Neon: return neon::fn(__VA_ARGS__);            \
    default: return scalar::fn(__VA_ARGS__);                 \
  }
#else
#define NCW_DISPATCH(fn, ...) return scalar::fn(__VA_ARGS__);
#endif

double dot(std::span<const double> a, std::span<const double> b) { NCW_DISPATCH(dot, a, b) }
double sum(std::span<const double> x) { NCW_DISPATCH(sum, x) }
double sum_sq_dev(std::span<const double> x, double center) { NCW_DISPATCH(sum_sq_dev, x, center) }

#undef NCW_DISPATCH

}  // namespace ncw::kernels
