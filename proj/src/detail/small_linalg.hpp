// SPDX-License-Identifier: Apache-2.0
#pragma once

// Allocation-free helpers for the Monte-Carlo hot loops. Matrices are dense
// column-major arrays of order d <= kMaxSmallDim.

#include <array>
#include <cmath>
#include <stdexcept>

#include "ncw/common.hpp"

namespace ncw::detail {

inline constexpr int kMaxSmallDim = 16;
using SmallBuf = std::array<double, kMaxSmallDim * kMaxSmallDim>;

inline void require_small(int d) {
  if (d < 1 || d > kMaxSmallDim)
    throw std::invalid_argument("Monte-Carlo kernels support 1 <= d <= 16");
}

/// Haar orthogonal matrix into q (Gram-Schmidt twice on Gaussian columns).
inline void haar_into(double* q, int d, Rng& rng) {
  for (int i = 0; i < d * d; ++i) q[i] = std_normal(rng);
  for (int j = 0; j < d; ++j) {
    double* cj = q + j * d;
    for (int pass = 0; pass < 2; ++pass)
      for (int k = 0; k < j; ++k) {
        const double* ck = q + k * d;
        double dot = 0.0;
        for (int i = 0; i < d; ++i) dot += ck[i] * cj[i];
        for (int i = 0; i < d; ++i) cj[i] -= dot * ck[i];
      }
    double nrm = 0.0;
    for (int i = 0; i < d; ++i) nrm += cj[i] * cj[i];
    nrm = 1.0 / std::sqrt(nrm);
    for (int i = 0; i < d; ++i) cj[i] *= nrm;
  }
}

/// out = u x u^T for symmetric x; tmp is scratch of the same size.
inline void congruence_into(const double* u, const double* x, int d, double* tmp, double* out) {
  // tmp = u x
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) {
      double s = 0.0;
      for (int k = 0; k < d; ++k) s += u[i + k * d] * x[k + j * d];
      tmp[i + j * d] = s;
    }
  // out = tmp u^T, symmetric
  for (int j = 0; j < d; ++j)
    for (int i = 0; i <= j; ++i) {
      double s = 0.0;
      for (int k = 0; k < d; ++k) s += tmp[i + k * d] * u[j + k * d];
      out[i + j * d] = s;
      out[j + i * d] = s;
    }
}

/// Logs of the leading principal minors of symmetric a (order d, leading
/// dimension lda) via Cholesky. Returns the number of minors that are
/// positive; log_minor[k] is valid for k below that count.
inline int log_leading_minors(const double* a, int d, int lda, double* log_minor) {
  SmallBuf l{};
  double acc = 0.0;
  for (int j = 0; j < d; ++j) {
    double piv = a[j + j * lda];
    for (int k = 0; k < j; ++k) piv -= l[j + k * d] * l[j + k * d];
    if (!(piv > 0.0)) return j;
    const double ljj = std::sqrt(piv);
    l[j + j * d] = ljj;
    acc += std::log(piv);
    log_minor[j] = acc;
    for (int i = j + 1; i < d; ++i) {
      double s = a[i + j * lda];
      for (int k = 0; k < j; ++k) s -= l[i + k * d] * l[j + k * d];
      l[i + j * d] = s / ljj;
    }
  }
  return d;
}

/// Delta with real exponents m_1..m_d on the leading d x d block of a.
/// Throws DomainError if a minor with nonzero exponent is not positive.
inline double delta_exponents(const double* a, int d, int lda, const double* m) {
  std::array<double, kMaxSmallDim> lm{};
  const int positive = log_leading_minors(a, d, lda, lm.data());
  double log_val = 0.0;
  for (int k = 0; k < d; ++k) {
    const double e = (k + 1 < d) ? m[k] - m[k + 1] : m[k];
    if (e == 0.0) continue;
    if (k >= positive) throw DomainError("delta_kappa: leading minor " + std::to_string(k + 1) + " is not positive");
    log_val += e * lm[k];
  }
  return std::exp(log_val);
}

}  // namespace ncw::detail
