// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <stdexcept>

#include "ncw/measures.hpp"

namespace ncw {

double laplace_ncw(const SymMatrix& s, const NcwParams& params) {
  params.validate();
  const int d = params.d();
  if (s.dim() != d) throw std::invalid_argument("laplace_ncw: dimension mismatch");
  const Eigen::MatrixXd m = Eigen::MatrixXd::Identity(d, d) + 2.0 * params.sigma.matrix() * s.matrix();
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  const double det = lu.determinant();
  if (!(det > 0.0) || !std::isfinite(det)) throw DomainError("laplace_ncw: I + 2 Sigma s is singular");
  const Eigen::MatrixXd inv_w = lu.solve(params.w.matrix());
  const double expo = -2.0 * (s.matrix() * inv_w).trace();
  return std::exp(-0.5 * params.two_p * std::log(det) + expo);
}

double log_laplace_m(const SymMatrix& s, const MeasureSpec& spec) {
  spec.validate();
  if (s.dim() != spec.d) throw std::invalid_argument("laplace_m: dimension mismatch");
  const double logdet = s.log_det();  // throws unless s is positive definite
  const Eigen::MatrixXd inv = s.inverse().matrix();
  double tr = 0.0;
  for (int i = spec.d - spec.k; i < spec.d; ++i) tr += inv(i, i);
  return -0.5 * spec.two_p * logdet + tr;
}

double laplace_m(const SymMatrix& s, const MeasureSpec& spec) { return std::exp(log_laplace_m(s, spec)); }

CanonicalReduction reduce_to_canonical(const NcwParams& params, double tol) {
  params.validate();
  const int d = params.d();
  const SymMatrix sigma_inv = params.sigma.inverse();
  // 2 (2 Sigma)^{-1} w (2 Sigma)^{-1} = (1/2) Sigma^{-1} w Sigma^{-1}
  const SymMatrix a = 0.5 * congruence(sigma_inv.matrix(), params.w);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a.matrix());
  const Eigen::VectorXd ev = eig.eigenvalues();
  const Eigen::MatrixXd u = eig.eigenvectors();
  const double top = std::max(0.0, ev.maxCoeff());
  const double thresh = tol * top;

  CanonicalReduction out;
  out.b = 0.5 * sigma_inv;
  for (int i = 0; i < d; ++i) {
    if (top > 0.0 && ev(i) > thresh) ++out.k;
    if (top > 0.0 && ev(i) > 0.01 * thresh && ev(i) <= 100.0 * thresh)
      out.warning = "eigenvalue near the rank threshold; k may be ambiguous";
  }
  Eigen::VectorXd scale = Eigen::VectorXd::Ones(d);
  for (int i = d - out.k; i < d; ++i) scale(i) = 1.0 / std::sqrt(ev(i));
  out.q = scale.asDiagonal() * u.transpose();

  const Eigen::MatrixXd qinv = out.q.inverse();
  const SymMatrix canon = SymMatrix::canonical_shift(out.k, d);
  const Eigen::MatrixXd rebuilt = qinv * canon.matrix() * qinv.transpose();
  out.residual = (rebuilt - a.matrix()).cwiseAbs().maxCoeff() / std::max(1.0, a.max_abs());
  return out;
}

double laplace_via_reduction(const SymMatrix& s, const NcwParams& params, const CanonicalReduction& red) {
  const MeasureSpec spec{params.two_p, red.k, params.d()};
  const SymMatrix at_s = congruence(red.q, s + red.b);
  const SymMatrix at_0 = congruence(red.q, red.b);
  return std::exp(log_laplace_m(at_s, spec) - log_laplace_m(at_0, spec));
}

}  // namespace ncw
