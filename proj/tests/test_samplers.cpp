// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "ncw/samplers.hpp"
#include "test_util.hpp"

using namespace ncw;
using ncw::testing::random_pd;
using ncw::testing::rel_err;

namespace {

bool within(const McEstimate& e, double want, double sigmas = 4.0) {
  return std::abs(e.mean - want) <= sigmas * e.std_error + 1e-12 * std::abs(want);
}

Eigen::VectorXd gaussian_vector(int d, Rng& rng) {
  Eigen::VectorXd v(d);
  for (int i = 0; i < d; ++i) v(i) = std_normal(rng);
  return v;
}

// E X_ij from central differences of the Laplace transform at s = 0.
double mean_from_laplace(const NcwParams& p, int i, int j) {
  const int d = p.d();
  const double h = 1e-5;
  auto at = [&](double t) {
    SymMatrix s(d);
    s.set(i, j, t);
    if (i == j) s.set(i, i, t);
    return laplace_ncw(s, p);
  };
  const double deriv = (at(h) - at(-h)) / (2 * h);
  return i == j ? -deriv : -0.5 * deriv;
}

// int_0^t cosh(2 sqrt(l)) dl.
double cosh_mass(double t) {
  const double st = std::sqrt(t);
  return st * std::sinh(2 * st) - 0.5 * (std::cosh(2 * st) - 1.0);
}

}  // namespace

TEST_CASE("decompose_w") {
  const auto z = decompose_w(SymMatrix(3), 2);
  REQUIRE(z.means.size() == 2u);
  for (const auto& m : z.means) CHECK(m.norm() == 0.0);

  const auto c = decompose_w(2.0 * SymMatrix::canonical_shift(2, 4), 2);
  REQUIRE(c.means.size() == 2u);
  for (const auto& m : c.means) {
    CHECK(m.norm() == doctest::Approx(std::sqrt(2.0)));
    CHECK(m(0) == 0.0);
    CHECK(m(1) == 0.0);
  }

  Rng rng(2);
  for (int d = 1; d <= 5; ++d) {
    const Eigen::VectorXd v = gaussian_vector(d, rng);
    const auto one = decompose_w(SymMatrix(Eigen::MatrixXd(v * v.transpose())), 1);
    CHECK(std::min((one.means[0] - v).norm(), (one.means[0] + v).norm()) < 1e-10 * v.norm());

    const SymMatrix w = random_pd(d, rng);
    const auto full = decompose_w(w, d + 1);
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(d, d);
    for (const auto& m : full.means) acc += m * m.transpose();
    CHECK((acc - w.matrix()).cwiseAbs().maxCoeff() <= 1e-10 * w.max_abs());
    if (d >= 2) CHECK_THROWS_AS(decompose_w(w, d - 1), ExistenceError);
  }
}

TEST_CASE("NCW sampler") {
  Rng rng(7);
  const int d = 3;
  NcwParams p{3.0, SymMatrix(d), random_pd(d, rng, 0.4, 1.5)};
  const Eigen::VectorXd v = gaussian_vector(d, rng), u = gaussian_vector(d, rng);
  p.w = SymMatrix(Eigen::MatrixXd(0.3 * (v * v.transpose() + u * u.transpose())));
  const NcwSampler sampler(p);
  CHECK(sampler.n() == 3);

  // First moment against the derivative of the closed form.
  const std::int64_t n = 100000;
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) {
      const double want = mean_from_laplace(p, i, j);
      CHECK(rel_err(want, 3.0 * p.sigma(i, j) + 2.0 * p.w(i, j)) < 1e-6);
      Rng r(100 + 10 * i + j);
      const auto est = mc_mean(n, r, 0, [&](Rng& g) { return sampler.sample(g)(i, j); });
      CAPTURE(i);
      CAPTURE(j);
      CHECK(within(est, want));
    }

  const SymMatrix s = SymMatrix::identity(d);
  CHECK(within(ncw_laplace_mc(s, p, n, rng), laplace_ncw(s, p)));

  // Rank-one draws for n = 1.
  NcwParams p1{1.0, SymMatrix(d), SymMatrix::identity(d)};
  const NcwSampler s1(p1);
  for (int t = 0; t < 200; ++t) CHECK(factor_rank(s1.draw(rng).factor, kFactorRankTol) == 1);

  NcwParams bad{1.5, SymMatrix(d), SymMatrix::identity(d)};
  CHECK_THROWS_AS(NcwSampler{bad}, ExistenceError);
  const double dg[] = {1.0, 1.0, 1e-14};
  NcwParams ill{3.0, SymMatrix(d), SymMatrix::diagonal(dg)};
  CHECK_THROWS_AS(NcwSampler{ill}, DomainError);
}

TEST_CASE("NCW orthogonal invariance") {
  Rng rng(8);
  const int d = 3;
  const NcwParams p{2.0, SymMatrix(d), SymMatrix::identity(d)};
  const SymMatrix s = random_pd(d, rng, 0.3, 1.2);
  const SymMatrix rs = congruence(haar_orthogonal(d, rng), s);
  const auto a = ncw_laplace_mc(s, p, 50000, rng);
  const auto b = ncw_laplace_mc(rs, p, 50000, rng);
  CHECK(std::abs(a.mean - b.mean) <= 4.0 * std::hypot(a.std_error, b.std_error));
}

TEST_CASE("sampling is reproducible and thread-independent") {
  const NcwParams p{2.0, SymMatrix::canonical_shift(1, 2), SymMatrix::identity(2)};
  Rng a(42), b(42);
  for (int t = 0; t < 20; ++t) CHECK(ncw_sample(p, a).matrix() == ncw_sample(p, b).matrix());
  const SymMatrix s = SymMatrix::identity(2);
  Rng r1(9), r2(9);
  const auto e1 = ncw_laplace_mc(s, p, 5000, r1, 1);
  const auto e2 = ncw_laplace_mc(s, p, 5000, r2, 4);
  CHECK(e1.mean == e2.mean);
  CHECK(e1.std_error == e2.std_error);
}

TEST_CASE("weighted m(n, k, d) sampler") {
  Rng rng(12);
  const MeasureSpec spec{2.0, 1, 2};
  for (int t = 0; t < 100; ++t) {
    const auto w = m_measure_sample(spec, rng);
    CHECK(w.weight > 0.0);
    CHECK(std::isfinite(w.weight));
  }
  const SymMatrix s = SymMatrix::identity(2);
  CHECK(within(m_laplace_mc(s, spec, 100000, rng), laplace_m(s, spec)));

  const MeasureSpec low{2.0, 2, 4};
  for (int t = 0; t < 100; ++t) CHECK(factor_rank(m_measure_sample(low, rng).factor, kFactorRankTol) <= 2);
  CHECK_THROWS_AS(m_measure_sample({1.0, 2, 3}, rng), ExistenceError);
  CHECK_THROWS_AS(m_laplace_mc(0.4 * SymMatrix::identity(2), spec, 100, rng), DomainError);
  LaplaceMcOptions loose;
  loose.allow_outside_domain = true;
  CHECK_NOTHROW(m_laplace_mc(0.4 * SymMatrix::identity(2), spec, 100, rng, loose));
}

TEST_CASE("singular part r") {
  Rng rng(13);
  for (int d = 2; d <= 3; ++d) {
    const SymMatrix s = SymMatrix::identity(d);
    CAPTURE(d);
    CHECK(within(singular_r_laplace_mc(s, 100000, rng), singular_r_laplace(s).value));
  }

  // d = 2: the nonzero eigenvalue has weighted law cosh(2 sqrt(l)) dl.
  const double edges[] = {0.0, 0.5, 1.0, 2.0};
  for (int b = 0; b < 3; ++b) {
    const auto est = mc_mean(100000, rng, 0, [&](Rng& r) {
      const auto w = singular_r_sample(2, r);
      const double lam = w.matrix.trace();
      return (lam >= edges[b] && lam < edges[b + 1]) ? w.weight : 0.0;
    });
    CAPTURE(b);
    CHECK(within(est, cosh_mass(edges[b + 1]) - cosh_mass(edges[b])));
  }
}

TEST_CASE("rank experiments") {
  Rng rng(21);
  CHECK(subspace_intersection_experiment(4, 2, 2, 10000, rng).hits == 0);
  CHECK(subspace_intersection_experiment(5, 2, 3, 2000, rng).hits == 0);
  const auto ctl = subspace_intersection_experiment(4, 2, 2, 500, rng, true);
  CHECK(ctl.probability() == 1.0);
  CHECK_THROWS(subspace_intersection_experiment(4, 2, 3, 10, rng));

  auto diag = [](std::vector<double> v) { return SymMatrix::diagonal(v); };
  const auto h1 = rank_additivity_experiment(diag({1, 0, 0, 0}), diag({0, 2, 3, 0}), 5000, rng);
  CHECK(h1.expected == 3);
  CHECK(h1.off_target() == 0);
  const auto h2 = rank_additivity_experiment(diag({1, 2, 0}), diag({0, 1, 1}), 5000, rng);
  CHECK(h2.expected == 3);
  CHECK(h2.off_target() == 0);
  const auto h3 = rank_additivity_experiment(diag({1, 2, 0}), SymMatrix(3), 500, rng);
  CHECK(h3.expected == 2);
  CHECK(h3.off_target() == 0);

  const auto c1 = convolution_support_experiment({1.0, 1, 3}, 1, 5000, rng);
  CHECK(c1.expected == 2);
  CHECK(c1.off_target() == 0);
  const auto c2 = convolution_support_experiment({2.0, 1, 3}, 1, 5000, rng);
  CHECK(c2.expected == 3);
  CHECK(c2.off_target() == 0);
  const auto c0 = convolution_support_experiment({2.0, 2, 4}, 0, 500, rng);
  CHECK(c0.expected == 2);
  CHECK(c0.off_target() == 0);

  for (int d = 2; d <= 4; ++d) {
    const auto r = singular_r_rank_experiment(d, 5000, rng);
    CHECK(r.expected == d - 1);
    CHECK(r.off_target() == 0);
    CHECK(r.trials == 5000);
    CHECK(r.quantiles.max.size() == static_cast<std::size_t>(d));
  }

  Rng a(5), b(5);
  const auto ra = singular_r_rank_experiment(3, 300, a, 1);
  const auto rb = singular_r_rank_experiment(3, 300, b, 3);
  CHECK(ra.counts == rb.counts);
  CHECK(ra.quantiles.median == rb.quantiles.median);
}
