// SPDX-License-Identifier: Apache-2.0
#pragma once

// Reduction kernels used by the zonal evaluator, the Monte-Carlo estimators
// and the quadrature sums. Every kernel has a scalar reference version and,
// where the target supports it, an AVX2 (x86-64) or NEON (aarch64) variant.
// The public entry points dispatch once at runtime on the detected ISA.

#include <cstddef>
#include <span>

namespace ncw::kernels {

enum class Isa { Scalar, Avx2, Neon };

const char* isa_name(Isa isa);

/// ISA the public entry points currently dispatch to.
Isa active_isa();

/// True if `isa` can run on this machine (Scalar is always available).
bool isa_supported(Isa isa);

/// Pins dispatch to `isa`; falls back to Scalar when unsupported. Intended
/// for tests and for the NCW_FORCE_SCALAR environment override.
void force_isa(Isa isa);

double dot(std::span<const double> a, std::span<const double> b);
double sum(std::span<const double> x);
/// Sum of (x_i - center)^2.
double sum_sq_dev(std::span<const double> x, double center);

namespace scalar {
double dot(std::span<const double> a, std::span<const double> b);
double sum(std::span<const double> x);
double sum_sq_dev(std::span<const double> x, double center);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
double dot(std::span<const double> a, std::span<const double> b);
double sum(std::span<const double> x);
double sum_sq_dev(std::span<const double> x, double center);
}  // namespace avx2
#endif

#if defined(__aarch64__)
namespace neon {
double dot(std::span<const double> a, std::span<const double> b);
double sum(std::span<const double> x);
double sum_sq_dev(std::span<const double> x, double center);
}  // namespace neon
#endif

}  // namespace ncw::kernels
