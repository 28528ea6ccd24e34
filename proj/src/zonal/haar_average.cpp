// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "../detail/small_linalg.hpp"
#include "ncw/zonal.hpp"

namespace ncw {
namespace {

void require_exponents(const SymMatrix& x, std::span<const double> exponents) {
  if (static_cast<int>(exponents.size()) != x.dim())
    throw std::invalid_argument("delta_kappa: need one exponent per dimension");
}

/// c when x == c * I exactly.
std::optional<double> scalar_multiple(const SymMatrix& x) {
  const double c = x(0, 0);
  for (int i = 0; i < x.dim(); ++i)
    for (int j = 0; j < x.dim(); ++j)
      if (x(i, j) != (i == j ? c : 0.0)) return std::nullopt;
  return c;
}

double weight_of(std::span<const double> exponents) {
  double w = 0.0;
  for (double m : exponents) w += m;
  return w;
}

void to_array(const SymMatrix& x, double* out) {
  const int d = x.dim();
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) out[i + j * d] = x(i, j);
}

McEstimate scaled(McEstimate e, double c) {
  e.mean *= c;
  e.std_error *= std::abs(c);
  return e;
}

}  // namespace

double delta_kappa(const SymMatrix& x, std::span<const double> exponents) {
  require_exponents(x, exponents);
  const int d = x.dim();
  if (d <= detail::kMaxSmallDim) {
    detail::SmallBuf a{};
    to_array(x, a.data());
    return detail::delta_exponents(a.data(), d, d, exponents.data());
  }
  double log_val = 0.0;
  for (int k = 0; k < d; ++k) {
    const double e = (k + 1 < d) ? exponents[k] - exponents[k + 1] : exponents[k];
    if (e == 0.0) continue;
    const double minor = x.matrix().topLeftCorner(k + 1, k + 1).determinant();
    if (!(minor > 0.0)) throw DomainError("delta_kappa: leading minor is not positive");
    log_val += e * std::log(minor);
  }
  return std::exp(log_val);
}

double delta_kappa(const SymMatrix& x, const Partition& kappa) {
  if (kappa.ambient() != x.dim()) throw std::invalid_argument("delta_kappa: partition ambient dimension differs from x");
  std::vector<double> m(kappa.parts().begin(), kappa.parts().end());
  return delta_kappa(x, m);
}

McEstimate phi_kappa_mc(const SymMatrix& x, std::span<const double> exponents, std::int64_t n, Rng& rng,
                        int threads) {
  require_exponents(x, exponents);
  const int d = x.dim();
  detail::require_small(d);
  if (n < 2) throw std::invalid_argument("phi_kappa_mc: n must be >= 2");
  if (const auto c = scalar_multiple(x)) {
    if (!(*c > 0.0)) throw DomainError("phi_kappa_mc: x must be positive definite");
    return {std::pow(*c, weight_of(exponents)), 0.0, n};
  }
  if (!is_positive_definite(x)) throw DomainError("phi_kappa_mc: x must be positive definite");
  detail::SmallBuf xa{};
  to_array(x, xa.data());
  const std::vector<double> m(exponents.begin(), exponents.end());
  return mc_mean(n, rng, threads, [&](Rng& r) {
    detail::SmallBuf u, tmp, y;
    detail::haar_into(u.data(), d, r);
    detail::congruence_into(u.data(), xa.data(), d, tmp.data(), y.data());
    return detail::delta_exponents(y.data(), d, d, m.data());
  });
}

bool LemmaReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const LemmaCheck& c) { return c.pass; });
}

namespace {

LemmaCheck compare(std::string name, McEstimate lhs, McEstimate rhs) {
  LemmaCheck c{std::move(name), lhs, rhs, 0.0, false};
  const double diff = std::abs(lhs.mean - rhs.mean);
  const double se = std::hypot(lhs.std_error, rhs.std_error);
  if (se > 0.0) {
    c.z_score = diff / se;
    c.pass = c.z_score <= 4.0;
  } else {
    c.pass = diff <= 1e-12 * std::max(1.0, std::abs(lhs.mean));
    c.z_score = c.pass ? 0.0 : INFINITY;
  }
  return c;
}

}  // namespace

LemmaReport zonal_lemma_checks(const SymMatrix& x, std::span<const double> exponents, double p, std::int64_t n,
                               Rng& rng, int threads) {
  require_exponents(x, exponents);
  const int d = x.dim();
  if (d < 2) throw std::invalid_argument("zonal_lemma_checks: need d >= 2");
  detail::require_small(d);
  if (!is_positive_definite(x)) throw DomainError("zonal_lemma_checks: x must be positive definite");
  const std::vector<double> m(exponents.begin(), exponents.end());
  const double det = x.determinant();
  LemmaReport report;

  // Peeling off the last row: nested Haar average over [u x u^T]_1.
  {
    const McEstimate lhs = phi_kappa_mc(x, m, n, rng, threads);
    McEstimate rhs;
    if (const auto c = scalar_multiple(x)) {
      rhs = {std::pow(*c, weight_of(m)), 0.0, n};
    } else {
      detail::SmallBuf xa{};
      to_array(x, xa.data());
      const int dm = d - 1;
      // Removing det(x)^{m_d} leaves exponents m_i - m_d on the leading block.
      std::vector<double> inner(m.begin(), m.end() - 1);
      for (double& e : inner) e -= m[d - 1];
      rhs = mc_mean(n, rng, threads, [&](Rng& r) {
        detail::SmallBuf u, tmp, y, v, yb, tmp2, z;
        detail::haar_into(u.data(), d, r);
        detail::congruence_into(u.data(), xa.data(), d, tmp.data(), y.data());
        for (int j = 0; j < dm; ++j)
          for (int i = 0; i < dm; ++i) yb[i + j * dm] = y[i + j * d];
        detail::haar_into(v.data(), dm, r);
        detail::congruence_into(v.data(), yb.data(), dm, tmp2.data(), z.data());
        return detail::delta_exponents(z.data(), dm, dm, inner.data());
      });
      rhs = scaled(rhs, std::pow(det, m[d - 1]));
    }
    report.checks.push_back(compare("peel-last-row", lhs, rhs));
  }

  // Inversion: Phi_m(x^{-1}) against Phi_{-m_d..-m_1}(x).
  {
    std::vector<double> reversed(m.rbegin(), m.rend());
    for (double& v : reversed) v = -v;
    const McEstimate lhs = phi_kappa_mc(x.inverse(), m, n, rng, threads);
    const McEstimate rhs = phi_kappa_mc(x, reversed, n, rng, threads);
    report.checks.push_back(compare("inversion", lhs, rhs));
  }

  // Determinant shift: Phi_m(x) det(x)^p against Phi_{m+p}(x).
  {
    std::vector<double> shifted = m;
    for (double& v : shifted) v += p;
    const McEstimate lhs = scaled(phi_kappa_mc(x, m, n, rng, threads), std::pow(det, p));
    const McEstimate rhs = phi_kappa_mc(x, shifted, n, rng, threads);
    report.checks.push_back(compare("determinant-shift", lhs, rhs));
  }
  return report;
}

}  // namespace ncw
