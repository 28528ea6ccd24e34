// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ncw/samplers.hpp"

namespace ncw {

WeightedSample m_measure_sample(const MeasureSpec& spec, Rng& rng) {
  spec.validate();
  const auto n = integer_shape(spec.two_p);
  if (!n || *n < 1) throw ExistenceError("m_measure_sample: needs an integer shape 2p = n >= 1");
  if (spec.k > *n) throw ExistenceError("m_measure_sample: needs k <= n");
  const int d = spec.d;
  // NCW(n, 2 I(k, d), I_d): Gaussian means 2 e_{d-k+i} (sum m m^T = 2 w, as
  // in NcwSampler), identity covariance.
  Eigen::MatrixXd f(d, *n);
  for (int j = 0; j < *n; ++j)
    for (int i = 0; i < d; ++i) f(i, j) = std_normal(rng);
  for (int i = 0; i < spec.k; ++i) f(d - spec.k + i, i) += 2.0;
  WeightedSample out;
  out.matrix = SymMatrix(Eigen::MatrixXd(f * f.transpose()));
  out.factor = std::move(f);
  out.log_weight = 0.5 * d * *n * std::numbers::ln2 + 2.0 * spec.k + 0.5 * out.matrix.trace();
  out.weight = std::exp(out.log_weight);
  return out;
}

WeightedSample singular_r_sample(int d, Rng& rng) {
  if (d < 2) throw std::invalid_argument("singular_r_sample: need d >= 2");
  const WeightedSample inner = m_measure_sample({static_cast<double>(d - 1), d - 1, d - 1}, rng);
  const Eigen::MatrixXd u = haar_orthogonal(d, rng);
  Eigen::MatrixXd embedded = Eigen::MatrixXd::Zero(d, d - 1);
  embedded.topRows(d - 1) = inner.factor;
  WeightedSample out;
  out.factor = u * embedded;
  out.matrix = SymMatrix(Eigen::MatrixXd(out.factor * out.factor.transpose()));
  const double logdet = inner.matrix.log_det();
  out.log_weight = inner.log_weight + 0.5 * (std::log(std::numbers::pi) + logdet) - std::lgamma(0.5 * d);
  out.weight = std::exp(out.log_weight);
  return out;
}

namespace {

void require_domain(const SymMatrix& s, const LaplaceMcOptions& opts, const char* what) {
  if (opts.allow_outside_domain) return;
  if (!(s.eigenvalues().minCoeff() > 0.5))
    throw DomainError(std::string(what) + ": weighted estimates need s > I/2 (set allow_outside_domain to override)");
}

}  // namespace

McEstimate m_laplace_mc(const SymMatrix& s, const MeasureSpec& spec, std::int64_t n, Rng& rng,
                        const LaplaceMcOptions& opts) {
  if (s.dim() != spec.d) throw std::invalid_argument("m_laplace_mc: dimension mismatch");
  require_domain(s, opts, "m_laplace_mc");
  return mc_mean(n, rng, opts.threads, [&](Rng& r) {
    const WeightedSample w = m_measure_sample(spec, r);
    return std::exp(w.log_weight - trace_product(s, w.matrix));
  });
}

McEstimate singular_r_laplace_mc(const SymMatrix& s, std::int64_t n, Rng& rng, const LaplaceMcOptions& opts) {
  require_domain(s, opts, "singular_r_laplace_mc");
  const int d = s.dim();
  return mc_mean(n, rng, opts.threads, [&](Rng& r) {
    const WeightedSample w = singular_r_sample(d, r);
    return std::exp(w.log_weight - trace_product(s, w.matrix));
  });
}

}  // namespace ncw
