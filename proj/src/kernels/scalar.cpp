// SPDX-License-Identifier: Apache-2.0
#include "ncw/kernels.hpp"

#include <cassert>

namespace ncw::kernels::scalar {

double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double sum(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) acc += v;
  return acc;
}

double sum_sq_dev(std::span<const double> x, double center) {
  double acc = 0.0;
  for (double v : x) {
    const double e = v - center;
    acc += e * e;
  }
  return acc;
}

}  // namespace ncw::kernels::scalar
