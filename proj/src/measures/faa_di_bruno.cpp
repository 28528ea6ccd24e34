// SPDX-License-Identifier: Apache-2.0
// Closed forms for the n-th x-derivative of (x^2 - y^2 - z^2)^n and ^(n-1),
// checked against exact polynomial differentiation (rational arithmetic at
// the exact binary value of the point) and against Richardson-extrapolated
// central differences in 50-digit floating point.
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "ncw/measures.hpp"

namespace ncw {

namespace {

using boost::multiprecision::cpp_int;
using Big = boost::multiprecision::cpp_bin_float_50;

template <class T>
T factorial(int n) {
  T f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

template <class T>
T power(const T& base, int e) {
  T r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

// Closed form with exponent n (shift 0) or n - 1 (shift 1).
template <class T>
T closed_form(int n, int shift, const T& x, const T& q) {
  T sum = 0;
  for (int k = shift; 2 * k <= n; ++k)
    sum += power(q, k - shift) / (factorial<T>(k - shift) * factorial<T>(k)) * power(T(2 * x), n - 2 * k) /
           factorial<T>(n - 2 * k);
  return factorial<T>(n) * factorial<T>(n - shift) * sum;
}

// d^n/dx^n (x^2 - c)^e by expanding the binomial.
Rational exact_derivative(int n, int e, const Rational& x, const Rational& c) {
  Rational total = 0;
  for (int j = 0; j <= e; ++j) {
    if (2 * j < n) continue;
    cpp_int binom = factorial<cpp_int>(e) / (factorial<cpp_int>(j) * factorial<cpp_int>(e - j));
    cpp_int falling = factorial<cpp_int>(2 * j) / factorial<cpp_int>(2 * j - n);
    Rational term = Rational(binom * falling) * power(Rational(-c), e - j) * power(x, 2 * j - n);
    total += term;
  }
  return total;
}

Big finite_difference(int n, int e, const Big& x, const Big& c) {
  auto f = [&](const Big& t) { return power(Big(t * t - c), e); };
  auto central = [&](const Big& h) {
    Big s = 0;
    Big binom = 1;
    for (int i = 0; i <= n; ++i) {
      const Big offset = (Big(n) / 2 - i) * h;
      s += ((i % 2) ? -binom : binom) * f(x + offset);
      binom = binom * (n - i) / (i + 1);
    }
    return s / power(h, n);
  };
  // Error is a polynomial in h^2; Richardson eliminates it level by level.
  constexpr int levels = 8;
  std::vector<Big> t(levels);
  Big h = Big(1) / 16;
  for (int i = 0; i < levels; ++i, h /= 2) t[i] = central(h);
  for (int level = 1; level < levels; ++level) {
    const Big factor = power(Big(4), level);
    for (int i = levels - 1; i >= level; --i) t[i] = (factor * t[i] - t[i - 1]) / (factor - 1);
  }
  return t[levels - 1];
}

double rel_or_abs(double got, double want) {
  return want == 0.0 ? std::abs(got) : std::abs(got - want) / std::abs(want);
}

}  // namespace

FaaReport faa_di_bruno_check(int n, const ConePoint2& point) {
  if (n < 1 || n > 10) throw std::invalid_argument("faa_di_bruno_check: need 1 <= n <= 10");
  FaaReport rep;
  rep.n = n;
  rep.point = point;
  const Rational xr(point.x), yr(point.y), zr(point.z);
  const Rational c = yr * yr + zr * zr;
  const Rational q = xr * xr - c;
  const Rational cf_n = closed_form<Rational>(n, 0, xr, q);
  const Rational cf_nm1 = closed_form<Rational>(n, 1, xr, q);
  rep.exact_match = cf_n == exact_derivative(n, n, xr, c) && cf_nm1 == exact_derivative(n, n - 1, xr, c);
  rep.closed_n = cf_n.convert_to<double>();
  rep.closed_nm1 = cf_nm1.convert_to<double>();

  const Big xb(point.x), cb = Big(point.y) * point.y + Big(point.z) * point.z;
  const double fd_n = finite_difference(n, n, xb, cb).convert_to<double>();
  const double fd_nm1 = finite_difference(n, n - 1, xb, cb).convert_to<double>();
  rep.fd_rel_err = std::max(rel_or_abs(fd_n, rep.closed_n), rel_or_abs(fd_nm1, rep.closed_nm1));
  return rep;
}

}  // namespace ncw
