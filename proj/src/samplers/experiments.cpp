// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <stdexcept>

#include "ncw/samplers.hpp"

namespace ncw {

std::int64_t RankHistogram::off_target() const {
  std::int64_t off = 0;
  for (std::size_t r = 0; r < counts.size(); ++r)
    if (static_cast<int>(r) != expected) off += counts[r];
  return off;
}

namespace {

// Per-trial record collected by every rank experiment.
struct Trial {
  int factor_rank = 0;
  int eigen_rank = 0;
  Eigen::VectorXd normalized;  // ascending eigenvalues / largest
};

Trial measure(const Eigen::MatrixXd& factor) {
  Trial t;
  t.factor_rank = factor.cols() == 0 ? 0 : factor_rank(factor, kFactorRankTol);
  const Eigen::MatrixXd x = factor * factor.transpose();
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(x, Eigen::EigenvaluesOnly).eigenvalues();
  const double top = std::max(ev.maxCoeff(), 0.0);
  t.normalized = top > 0.0 ? Eigen::VectorXd(ev / top) : Eigen::VectorXd(Eigen::VectorXd::Zero(ev.size()));
  for (int i = 0; i < ev.size(); ++i) t.eigen_rank += top > 0.0 && ev(i) > kFactorRankTol * top;
  return t;
}

template <class Factor>
RankHistogram run(int d, int expected, std::int64_t trials, Rng& rng, int threads, Factor make_factor) {
  if (trials < 1) throw std::invalid_argument("rank experiment: trials must be >= 1");
  std::vector<Trial> results(static_cast<std::size_t>(trials));
  const auto seeds = shard_seeds(rng, shard_count(trials));
  for_shards(trials, threads, [&](int shard, std::int64_t begin, std::int64_t end) {
    Rng local(seeds[static_cast<std::size_t>(shard)]);
    for (std::int64_t i = begin; i < end; ++i) results[static_cast<std::size_t>(i)] = measure(make_factor(local));
  });
  RankHistogram h;
  h.expected = expected;
  h.trials = trials;
  h.counts.assign(static_cast<std::size_t>(d + 1), 0);
  h.eigen_counts.assign(static_cast<std::size_t>(d + 1), 0);
  for (const auto& t : results) {
    ++h.counts[static_cast<std::size_t>(t.factor_rank)];
    ++h.eigen_counts[static_cast<std::size_t>(t.eigen_rank)];
  }
  std::vector<double> column(results.size());
  for (int i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < results.size(); ++j) column[j] = results[j].normalized(i);
    std::sort(column.begin(), column.end());
    h.quantiles.min.push_back(column.front());
    h.quantiles.median.push_back(column[column.size() / 2]);
    h.quantiles.max.push_back(column.back());
  }
  return h;
}

// Columns spanning the range of a positive semidefinite matrix.
Eigen::MatrixXd range_factor(const SymMatrix& x) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(x.matrix());
  const Eigen::VectorXd ev = eig.eigenvalues();
  const double top = std::max(ev.maxCoeff(), 0.0);
  if (ev.minCoeff() < -kFactorRankTol * std::max(top, 1.0))
    throw DomainError("rank experiment: matrices must be positive semidefinite");
  std::vector<int> keep;
  for (int i = 0; i < ev.size(); ++i)
    if (top > 0.0 && ev(i) > kFactorRankTol * top) keep.push_back(i);
  Eigen::MatrixXd f(x.dim(), static_cast<int>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j)
    f.col(static_cast<int>(j)) = std::sqrt(ev(keep[j])) * eig.eigenvectors().col(keep[j]);
  return f;
}

Eigen::MatrixXd hstack(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows(), a.cols() + b.cols());
  out << a, b;
  return out;
}

}  // namespace

IntersectionResult subspace_intersection_experiment(int d, int n, int k, std::int64_t trials, Rng& rng, bool control,
                                                    int threads) {
  if (d < 1 || n < 0 || k < 0 || k > d - n) throw std::invalid_argument("subspace_intersection: need 0 <= k <= d - n");
  if (trials < 1) throw std::invalid_argument("subspace_intersection: trials must be >= 1");
  std::vector<std::uint8_t> hit(static_cast<std::size_t>(trials), 0);
  const auto seeds = shard_seeds(rng, shard_count(trials));
  for_shards(trials, threads, [&](int shard, std::int64_t begin, std::int64_t end) {
    Rng local(seeds[static_cast<std::size_t>(shard)]);
    for (std::int64_t t = begin; t < end; ++t) {
      Eigen::MatrixXd stacked = Eigen::MatrixXd::Zero(d, n + k);
      for (int i = 0; i < n; ++i) stacked(i, i) = 1.0;
      for (int j = 0; j < k; ++j)
        for (int i = 0; i < (control ? n : d); ++i) stacked(i, n + j) = std_normal(local);
      const int rank = n + k == 0 ? 0 : factor_rank(stacked, kFactorRankTol);
      hit[static_cast<std::size_t>(t)] = rank < n + k;
    }
  });
  IntersectionResult out;
  out.trials = trials;
  for (auto h : hit) out.hits += h;
  return out;
}

RankHistogram rank_additivity_experiment(const SymMatrix& x0, const SymMatrix& y0, std::int64_t trials, Rng& rng,
                                         int threads) {
  if (x0.dim() != y0.dim()) throw std::invalid_argument("rank_additivity: dimension mismatch");
  const int d = x0.dim();
  const Eigen::MatrixXd a = range_factor(x0);
  const Eigen::MatrixXd b = range_factor(y0);
  const int expected = std::min<int>(static_cast<int>(a.cols() + b.cols()), d);
  return run(d, expected, trials, rng, threads,
             [&](Rng& r) { return hstack(a, haar_orthogonal(d, r) * b); });
}

RankHistogram convolution_support_experiment(const MeasureSpec& spec_a, int b, std::int64_t trials, Rng& rng,
                                             int threads) {
  spec_a.validate();
  const auto a = integer_shape(spec_a.two_p);
  if (!a || *a < 1 || spec_a.k > *a) throw ExistenceError("convolution_support: spec_a must be samplable (k <= n)");
  if (b < 0) throw std::invalid_argument("convolution_support: b must be >= 0");
  const int d = spec_a.d;
  const MeasureSpec spec_b{static_cast<double>(b), 0, d};
  return run(d, std::min(*a + b, d), trials, rng, threads, [&](Rng& r) {
    Eigen::MatrixXd f = m_measure_sample(spec_a, r).factor;
    if (b > 0) f = hstack(f, m_measure_sample(spec_b, r).factor);
    return f;
  });
}

RankHistogram singular_r_rank_experiment(int d, std::int64_t trials, Rng& rng, int threads) {
  return run(d, d - 1, trials, rng, threads, [&](Rng& r) { return singular_r_sample(d, r).factor; });
}

}  // namespace ncw
