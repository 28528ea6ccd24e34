// SPDX-License-Identifier: Apache-2.0
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <numbers>

#include "ncw/measures.hpp"

namespace ncw {

namespace {

using Gk = boost::math::quadrature::gauss_kronrod<double, 31>;
constexpr unsigned kMaxDepth = 18;
// exp(-75) ~ 3e-33: contributions past the cutoff are far below any tolerance.
constexpr double kTailLog = 75.0;

// Smallest L with decay * L - growth * sqrt(L) >= kTailLog.
double half_line_limit(double decay, double growth) {
  const double t = (growth + std::sqrt(growth * growth + 4.0 * decay * kTailLog)) / (2.0 * decay);
  return t * t;
}

void require_interior(double a, double b, double c) {
  if (!(a > std::hypot(b, c))) throw DomainError("cone Laplace transform: need a > sqrt(b^2 + c^2)");
}

}  // namespace

double bessel_i0_scaled(double x) {
  if (x < 0.0) throw DomainError("bessel_i0_scaled: need x >= 0");
  if (x < 600.0) return boost::math::cyl_bessel_i(0, x) * std::exp(-x);
  const double u = 1.0 / x;
  return (1.0 + u * (0.125 + u * (9.0 / 128.0 + u * 225.0 / 3072.0))) / std::sqrt(2.0 * std::numbers::pi * x);
}

// The theta integral of exp(-2r(b cos + c sin)) over the circle is
// 2 pi I0(2 r rho); polar coordinates in (y, z) and u = x - r then give a
// two-dimensional integral, evaluated with v^2 substitutions to smooth the
// endpoint behavior.
double cone_laplace_ac(double a, double b, double c, const std::function<double(double, double)>& h,
                       double growth, double rel_tol) {
  require_interior(a, b, c);
  const double rho = std::hypot(b, c);
  const double lu = std::sqrt(half_line_limit(2.0 * a, growth));
  const double lr = std::sqrt(half_line_limit(2.0 * (a - rho), 2.0 * growth));
  auto outer = [&](double v) {
    const double r = v * v;
    auto inner = [&](double w) {
      const double u = w * w;
      return 2.0 * w * std::exp(-2.0 * a * u) * h(r + u, r);
    };
    const double in = Gk::integrate(inner, 0.0, lu, kMaxDepth, rel_tol);
    return 2.0 * v * 2.0 * std::numbers::pi * r * std::exp(-2.0 * r * (a - rho)) * bessel_i0_scaled(2.0 * r * rho) * in;
  };
  return Gk::integrate(outer, 0.0, lr, kMaxDepth, rel_tol);
}

double cone_laplace_sheet(double a, double b, double c, const std::function<double(double)>& sheet, double growth,
                          double rel_tol) {
  require_interior(a, b, c);
  const double rho = std::hypot(b, c);
  const double lr = std::sqrt(half_line_limit(2.0 * (a - rho), growth));
  auto f = [&](double v) {
    const double r = v * v;
    return 2.0 * v * 2.0 * std::numbers::pi * r * sheet(r) * std::exp(-2.0 * r * (a - rho)) *
           bessel_i0_scaled(2.0 * r * rho);
  };
  return Gk::integrate(f, 0.0, lr, kMaxDepth, rel_tol);
}

double m122_laplace_quadrature(double a, double b, double c, double rel_tol) {
  const double sheet = cone_laplace_sheet(a, b, c, [](double r) { return m122_g(2.0 * r); }, 8.0, rel_tol);
  const double ac = cone_laplace_ac(
      a, b, c, [](double x, double r) { return m122_ac_density(ConePoint2{x, r, 0.0}); }, 8.0, rel_tol);
  return sheet + ac;
}

double m111_laplace_quadrature(double s) {
  if (!(s > 0.0)) throw DomainError("m111_laplace_quadrature: need s > 0");
  // lambda = v^2; the density's lambda^{-1/2} singularity cancels against 2v.
  const double lv = (2.0 + std::sqrt(4.0 + 4.0 * s * kTailLog)) / (2.0 * s);
  auto f = [&](double v) { return 2.0 * v * std::exp(-s * v * v) * m111_density(v * v); };
  return Gk::integrate(f, 0.0, lv, kMaxDepth, 1e-14);
}

}  // namespace ncw
