// SPDX-License-Identifier: Apache-2.0
// Closed forms for m(1, 2, 2) in cone coordinates and for m(1, 1, 1).
#include <cmath>
#include <limits>
#include <numbers>

#include "ncw/measures.hpp"

namespace ncw {

namespace {

constexpr double kTwoOverSqrtPi = std::numbers::inv_sqrtpi * 2.0;

void require_cone(const ConePoint2& p, const char* what) {
  if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z))
    throw DomainError(std::string(what) + ": non-finite point");
  if (!(p.x >= p.radius()) || p.x <= 0.0) throw DomainError(std::string(what) + ": point outside the cone");
}

}  // namespace

double m122_g(double z) {
  if (!(z > 0.0)) throw DomainError("m122_g: need z > 0");
  return 2.0 * std::cosh(2.0 * std::sqrt(z)) / (std::numbers::pi * z);
}

double m122_singular_density(double y, double z) {
  const double r = std::hypot(y, z);
  if (!(r > 0.0)) throw DomainError("m122_singular_density: undefined at the origin");
  return m122_g(2.0 * r);
}

double m122_ac_density(const ConePoint2& p, double rel_tol) {
  require_cone(p, "m122_ac_density");
  const double q = std::max(0.0, p.quadratic());
  const double two_x = 2.0 * p.x;
  const double log_q = q > 0.0 ? std::log(q) : -std::numeric_limits<double>::infinity();
  double total = 0.0;
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 2000; ++k) {
    // inner: sum_m (2x)^m / (m! Gamma(m + 2k + 5/2)) = R / Gamma(2k + 5/2)
    const double shift = 2.0 * k + 2.5;
    double r = 0.0, t = 1.0;
    for (int m = 0; m < 100000; ++m) {
      r += t;
      const double ratio = two_x / ((m + 1.0) * (m + shift));
      if (ratio < 1.0 && t * ratio <= rel_tol * 1e-3 * r) break;
      t *= ratio;
    }
    const double log_coef = (k > 0 ? k * log_q : 0.0) - std::lgamma(k + 1.0) - std::lgamma(k + 2.0) -
                            std::lgamma(shift);
    const double term = std::exp(log_coef) * r;
    total += term;
    if (q == 0.0) break;
    if (term <= prev && term <= rel_tol * 1e-3 * total) break;
    prev = term;
  }
  return kTwoOverSqrtPi * total;
}

double m122_ac_density_by_degree(const ConePoint2& p, double rel_tol) {
  require_cone(p, "m122_ac_density_by_degree");
  const double q = std::max(0.0, p.quadratic());
  const double two_x = 2.0 * p.x;
  double total = 0.0;
  double prev = std::numeric_limits<double>::infinity();
  for (int n = 2; n < 4000; ++n) {
    double block = 0.0;
    for (int k = 1; 2 * k <= n; ++k) {
      const int m = n - 2 * k;
      double lt = -std::lgamma(k * 1.0) - std::lgamma(k + 1.0) - std::lgamma(m + 1.0);
      if (k > 1) lt += (k - 1) * std::log(q);
      if (m > 0) lt += m * std::log(two_x);
      if (k > 1 && q == 0.0) continue;
      block += std::exp(lt);
    }
    block *= std::exp(-std::lgamma(n + 0.5));
    total += block;
    if (n > 3 && block <= prev && block <= rel_tol * 1e-3 * total) break;
    prev = block;
  }
  return kTwoOverSqrtPi * total;
}

double m122_laplace(double a, double b, double c) {
  const double q = a * a - b * b - c * c;
  if (!(a > 0.0) || !(q > 0.0)) throw DomainError("m122_laplace: (a, b, c) must be inside the cone");
  return std::exp(-0.5 * std::log(q) + 2.0 * a / q);
}

double m111_density(double lambda) {
  if (!(lambda > 0.0)) throw DomainError("m111_density: need lambda > 0");
  return std::cosh(2.0 * std::sqrt(lambda)) / std::sqrt(std::numbers::pi * lambda);
}

double m111_laplace(double s) {
  if (!(s > 0.0)) throw DomainError("m111_laplace: need s > 0");
  return std::exp(1.0 / s) / std::sqrt(s);
}

}  // namespace ncw
