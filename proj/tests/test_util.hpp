// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <vector>

#include "ncw/common.hpp"
#include "ncw/symcore.hpp"

namespace ncw::testing {

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

inline std::vector<double> random_spectrum(int d, Rng& rng, double lo = 0.0, double hi = 2.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> e(static_cast<std::size_t>(d));
  for (auto& v : e) v = u(rng);
  return e;
}

/// Random positive definite matrix with eigenvalues in [lo, hi].
inline SymMatrix random_pd(int d, Rng& rng, double lo = 0.3, double hi = 2.5) {
  const auto spec = random_spectrum(d, rng, lo, hi);
  const Eigen::MatrixXd u = haar_orthogonal(d, rng);
  Eigen::VectorXd ev(d);
  for (int i = 0; i < d; ++i) ev(i) = spec[static_cast<std::size_t>(i)];
  return SymMatrix(Eigen::MatrixXd(u * ev.asDiagonal() * u.transpose()));
}

/// Composite Simpson rule on [a, b] with n (even) panels.
template <class F>
double simpson(F f, double a, double b, int n = 2000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

/// Average over the rotation angle of a function of the 2 x 2 rotation
/// matrix; reflections contribute the same average for conjugation-invariant
/// integrands of the form g(u x u^T) with x diagonal.
template <class F>
double rotation_average(F f, int n = 4096) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = 2.0 * std::numbers::pi * i / n;
    Eigen::Matrix2d u;
    u << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
    s += f(u);
  }
  return s / n;
}

}  // namespace ncw::testing
