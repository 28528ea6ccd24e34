// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <stdexcept>

#include "ncw/zonal.hpp"

namespace ncw {
namespace {

double shifted_arg(const GammaArgs& args, std::size_t j) {
  const double a = args.z[j] + args.shift_p.value_or(0.0) - 0.5 * static_cast<double>(j);
  if (!(a > 0.0))
    throw DomainError("multivariate gamma: argument " + std::to_string(j + 1) +
                      " is at or beyond a pole");
  return a;
}

}  // namespace

double log_multivariate_gamma(const GammaArgs& args) {
  if (args.z.empty()) throw std::invalid_argument("multivariate gamma: empty argument list");
  double acc = 0.0;
  for (std::size_t j = 0; j < args.z.size(); ++j) acc += std::lgamma(shifted_arg(args, j));
  return acc;
}

double multivariate_gamma(const GammaArgs& args) {
  if (args.z.empty()) throw std::invalid_argument("multivariate gamma: empty argument list");
  double prod = 1.0;
  for (std::size_t j = 0; j < args.z.size(); ++j) prod *= std::tgamma(shifted_arg(args, j));
  if (std::isfinite(prod) && prod > 0.0) return prod;
  return std::exp(log_multivariate_gamma(args));
}

double log_multivariate_gamma(const Partition& kappa, double p) {
  GammaArgs args;
  for (int m : kappa.parts()) args.z.push_back(static_cast<double>(m));
  args.shift_p = p;
  return log_multivariate_gamma(args);
}

double pochhammer_kappa(double p, const Partition& kappa, bool allow_outside_domain) {
  const int d = kappa.ambient();
  if (!allow_outside_domain && !(p > 0.5 * (d - 1)))
    throw DomainError("pochhammer_kappa: p must exceed (d-1)/2");
  double prod = 1.0;
  for (int j = 0; j < d; ++j) {
    const double base = p - 0.5 * j;
    for (int i = 0; i < kappa[j]; ++i) prod *= base + i;
  }
  return prod;
}

Rational pochhammer_kappa_exact(const Rational& p, const Partition& kappa) {
  Rational prod = 1;
  for (int j = 0; j < kappa.ambient(); ++j) {
    const Rational base = p - Rational(j, 2);
    for (int i = 0; i < kappa[j]; ++i) prod *= base + i;
  }
  return prod;
}

Rational c_kappa_identity(const Partition& kappa) {
  using boost::multiprecision::cpp_int;
  const int d = kappa.ambient();
  const int w = kappa.weight();
  const int len = kappa.length();
  auto factorial = [](int n) {
    cpp_int f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
  };
  Rational value = Rational(cpp_int(1) << (2 * w)) * Rational(factorial(w));
  value *= pochhammer_kappa_exact(Rational(d, 2), kappa);
  cpp_int num = 1;
  for (int i = 0; i < len; ++i)
    for (int j = i + 1; j < len; ++j) num *= 2 * kappa[i] - 2 * kappa[j] - i + j;
  cpp_int den = 1;
  for (int i = 0; i < len; ++i) den *= factorial(2 * kappa[i] + len - (i + 1));
  return value * Rational(num, den);
}

}  // namespace ncw
