// SPDX-License-Identifier: Apache-2.0
#include "ncw/kernels.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

namespace ncw::kernels::neon {

double dot(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a.data() + i), vld1q_f64(b.data() + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a.data() + i + 2), vld1q_f64(b.data() + i + 2));
  }
  double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sum(std::span<const double> x) {
  const std::size_t n = x.size();
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vaddq_f64(acc0, vld1q_f64(x.data() + i));
    acc1 = vaddq_f64(acc1, vld1q_f64(x.data() + i + 2));
  }
  double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) acc += x[i];
  return acc;
}

double sum_sq_dev(std::span<const double> x, double center) {
  const std::size_t n = x.size();
  const float64x2_t c = vdupq_n_f64(center);
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t e = vsubq_f64(vld1q_f64(x.data() + i), c);
    acc = vfmaq_f64(acc, e, e);
  }
  double out = vaddvq_f64(acc);
  for (; i < n; ++i) {
    const double e = x[i] - center;
    out += e * e;
  }
  return out;
}

}  // namespace ncw::kernels::neon

#endif
