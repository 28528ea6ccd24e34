// SPDX-License-Identifier: Apache-2.0
#pragma once

// Gaussian-sum sampling of integer-shape NCW laws, importance-weighted
// sampling of m(n, k, d) and of the singular part r of m(d - 1, d, d), and
// the rank-support experiments.
//
// Every draw carries the Gaussian factor it was built from (x = F F^T), and
// ranks are measured on that factor: singular values of F above 1e-8 of the
// largest. This is stable where eigenvalue ranks of x are not, since x
// squares the conditioning of F.

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "ncw/common.hpp"
#include "ncw/measures.hpp"
#include "ncw/symcore.hpp"

namespace ncw {

inline constexpr double kFactorRankTol = 1e-8;

struct MeanDecomposition {
  std::vector<Eigen::VectorXd> means;  // n vectors; sum m m^T = w
};

/// m_i = sqrt(lambda_i) v_i over the nonzero eigenpairs (largest first),
/// padded with zeros to n vectors. Throws ExistenceError when rank(w) > n.
/// `tol` is relative to the largest eigenvalue.
MeanDecomposition decompose_w(const SymMatrix& w, int n, double tol = 1e-10);

/// A draw x = F F^T together with its factor F (d x n).
struct FactorDraw {
  SymMatrix matrix{1};
  Eigen::MatrixXd factor;
};

/// Sums of n independent Gaussian outer products with covariance sigma and
/// means sqrt(2) m_i, m_i from decompose_w(w). The factor sqrt(2) makes the
/// law match laplace_ncw, whose exponent carries 2w; E X = n sigma + 2w.
/// Requires integer 2p = n >= 1.
class NcwSampler {
 public:
  /// Throws ExistenceError for a non-integer shape or rank(w) > n, and
  /// DomainError when sigma has condition number above 1e12.
  explicit NcwSampler(NcwParams params);
  int n() const { return n_; }
  const NcwParams& params() const { return params_; }
  FactorDraw draw(Rng& rng) const;
  SymMatrix sample(Rng& rng) const { return draw(rng).matrix; }

 private:
  NcwParams params_;
  int n_ = 0;
  Eigen::MatrixXd chol_;   // lower Cholesky factor of sigma
  Eigen::MatrixXd means_;  // d x n
};

SymMatrix ncw_sample(const NcwParams& params, Rng& rng);

struct WeightedSample {
  SymMatrix matrix{1};
  double weight = 0.0;
  double log_weight = 0.0;
  Eigen::MatrixXd factor;
};

/// Draw from NCW(n, 2 I(k, d), I_d) with weight 2^{dn/2} e^{2k} e^{tr x / 2},
/// so that E[weight h(x)] = int h dm(n, k, d). Requires integer 2p = n and
/// k <= n.
WeightedSample m_measure_sample(const MeasureSpec& spec, Rng& rng);

/// Draw of r for d >= 2: x from m(d-1, d-1, d-1), u Haar on O(d),
/// t = u diag(x, 0) u^T, weight multiplied by sqrt(pi det x) / Gamma(d/2).
WeightedSample singular_r_sample(int d, Rng& rng);

struct LaplaceMcOptions {
  int threads = 0;
  /// The weighted estimators are only used for s > I/2, where the weight
  /// e^{tr x / 2} keeps the variance finite. Set to explore outside.
  bool allow_outside_domain = false;
};

/// Monte-Carlo estimate of E exp(-tr(s X)) for X ~ NCW.
McEstimate ncw_laplace_mc(const SymMatrix& s, const NcwParams& params, std::int64_t n, Rng& rng,
                          int threads = 0);
/// Weighted estimate of the Laplace transform of m(n, k, d) at s.
McEstimate m_laplace_mc(const SymMatrix& s, const MeasureSpec& spec, std::int64_t n, Rng& rng,
                        const LaplaceMcOptions& opts = {});
/// Weighted estimate of the Laplace transform of r at s (d = s.dim()).
McEstimate singular_r_laplace_mc(const SymMatrix& s, std::int64_t n, Rng& rng, const LaplaceMcOptions& opts = {});

// ------------------------------------------------------------ experiments

struct EigenQuantiles {
  // Per sorted eigenvalue index (ascending), quantiles of lambda_i / lambda_max.
  std::vector<double> min, median, max;
};

struct RankHistogram {
  std::vector<std::int64_t> counts;        // factor rank -> trials
  std::vector<std::int64_t> eigen_counts;  // eigenvalue rank at 1e-8 relative, for audit
  int expected = 0;
  std::int64_t trials = 0;
  std::int64_t off_target() const;
  EigenQuantiles quantiles;
};

struct IntersectionResult {
  std::int64_t hits = 0;
  std::int64_t trials = 0;
  double probability() const { return trials ? static_cast<double>(hits) / static_cast<double>(trials) : 0.0; }
};

/// F = span(e_1..e_n), G = span of k Gaussian vectors; a hit is
/// dim(F + G) < n + k. The control mode draws G inside F, so every trial
/// with k >= 1 hits. Requires k <= d - n.
IntersectionResult subspace_intersection_experiment(int d, int n, int k, std::int64_t trials, Rng& rng,
                                                    bool control = false, int threads = 0);

/// rank(x0 + U y0 U^T) for Haar U; expected min(rank x0 + rank y0, d).
RankHistogram rank_additivity_experiment(const SymMatrix& x0, const SymMatrix& y0, std::int64_t trials, Rng& rng,
                                         int threads = 0);

/// rank(X + Z) for X from m(spec_a) and Z from m(b, 0, d); expected
/// min(a + b, d) with a = spec_a.two_p. b = 0 means Z = 0.
RankHistogram convolution_support_experiment(const MeasureSpec& spec_a, int b, std::int64_t trials, Rng& rng,
                                             int threads = 0);

/// Ranks of singular_r_sample draws; expected d - 1.
RankHistogram singular_r_rank_experiment(int d, std::int64_t trials, Rng& rng, int threads = 0);

}  // namespace ncw
