// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ncw/samplers.hpp"

namespace ncw {

MeanDecomposition decompose_w(const SymMatrix& w, int n, double tol) {
  if (n < 0) throw std::invalid_argument("decompose_w: n must be >= 0");
  const int d = w.dim();
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(w.matrix());
  const Eigen::VectorXd ev = eig.eigenvalues();
  const double top = std::max(0.0, ev.maxCoeff());
  if (ev.minCoeff() < -std::max(tol * top, 1e-14)) throw DomainError("decompose_w: w must be positive semidefinite");
  MeanDecomposition out;
  for (int i = d - 1; i >= 0; --i) {
    if (!(top > 0.0) || ev(i) <= tol * top) break;
    if (static_cast<int>(out.means.size()) == n)
      throw ExistenceError("decompose_w: rank(w) exceeds n (RankExceedsShape)");
    out.means.push_back(std::sqrt(ev(i)) * eig.eigenvectors().col(i));
  }
  while (static_cast<int>(out.means.size()) < n) out.means.push_back(Eigen::VectorXd::Zero(d));
  return out;
}

NcwSampler::NcwSampler(NcwParams params) : params_(std::move(params)) {
  params_.validate();
  const auto n = integer_shape(params_.two_p);
  if (!n || *n < 1) throw ExistenceError("NcwSampler: Gaussian-sum sampling needs an integer shape 2p >= 1");
  n_ = *n;
  const Eigen::VectorXd ev = params_.sigma.eigenvalues();
  if (ev.maxCoeff() > 1e12 * ev.minCoeff()) throw DomainError("NcwSampler: sigma is too ill-conditioned");
  chol_ = params_.sigma.matrix().llt().matrixL();
  // The transform det(I + 2 Sigma s)^{-p} exp(-tr(2 s (I + 2 Sigma s)^{-1} w))
  // is that of a Gaussian sum whose means satisfy sum m m^T = 2 w.
  const auto dec = decompose_w(params_.w, n_);
  means_.resize(params_.d(), n_);
  for (int i = 0; i < n_; ++i) means_.col(i) = std::numbers::sqrt2 * dec.means[static_cast<std::size_t>(i)];
}

FactorDraw NcwSampler::draw(Rng& rng) const {
  const int d = params_.d();
  Eigen::MatrixXd z(d, n_);
  for (int j = 0; j < n_; ++j)
    for (int i = 0; i < d; ++i) z(i, j) = std_normal(rng);
  FactorDraw out;
  out.factor = means_ + chol_ * z;
  out.matrix = SymMatrix(Eigen::MatrixXd(out.factor * out.factor.transpose()));
  return out;
}

SymMatrix ncw_sample(const NcwParams& params, Rng& rng) { return NcwSampler(params).sample(rng); }

McEstimate ncw_laplace_mc(const SymMatrix& s, const NcwParams& params, std::int64_t n, Rng& rng, int threads) {
  const NcwSampler sampler(params);
  if (s.dim() != params.d()) throw std::invalid_argument("ncw_laplace_mc: dimension mismatch");
  return mc_mean(n, rng, threads, [&](Rng& r) { return std::exp(-trace_product(s, sampler.draw(r).matrix)); });
}

}  // namespace ncw
