// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <functional>

#include "ncw/harness.hpp"
#include "ncw/samplers.hpp"
#include "ncw/zonal.hpp"

namespace ncw::harness {

namespace {

using Clock = std::chrono::steady_clock;

constexpr double kRoundoffFloor = 1e-14;

// Runs checks in order and stops (flagging the report incomplete) once the
// time cap is exceeded.
class Runner {
 public:
  Runner(Report& report, const RunConfig& cfg) : report_(report), cfg_(cfg), start_(Clock::now()) {}

  void step(const std::function<void(std::vector<Record>&)>& check) {
    if (report_.incomplete) return;
    if (cfg_.max_seconds > 0.0 && elapsed() > cfg_.max_seconds) {
      report_.incomplete = true;
      report_.warnings.push_back("time cap reached; remaining checks skipped");
      return;
    }
    check(report_.results);
  }
  double elapsed() const { return std::chrono::duration<double>(Clock::now() - start_).count(); }

 private:
  Report& report_;
  const RunConfig& cfg_;
  Clock::time_point start_;
};

std::vector<double> uniform_spectrum(int d, Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> e(static_cast<std::size_t>(d));
  for (auto& v : e) v = u(rng);
  return e;
}

SymMatrix random_pd(int d, Rng& rng, double lo, double hi) {
  const auto e = uniform_spectrum(d, rng, lo, hi);
  const Eigen::MatrixXd u = haar_orthogonal(d, rng);
  return congruence(u, SymMatrix::diagonal(e));
}

std::string tag(const std::string& base, int d) { return base + " d=" + std::to_string(d); }

// ------------------------------------------------------------------ zonal

void zonal_suite(Runner& run, const RunConfig& cfg, Rng& rng) {
  for (int d = 1; d <= 5; ++d)
    run.step([&](std::vector<Record>& out) {
      double worst = 0.0;
      for (int t = 0; t < 100; ++t) {
        const auto e = uniform_spectrum(d, rng, 0.0, 2.0);
        double tr = 0.0;
        for (double v : e) tr += v;
        for (int k = 0; k <= 6; ++k) {
          double sum = 0.0;
          for (double c : zonal_C_weight(e, k)) sum += c;
          const double want = std::pow(tr, k);
          if (want > 0) worst = std::max(worst, std::abs(sum - want) / want);
        }
      }
      out.push_back(max_error_record(tag("sum rule k<=6", d), worst, 1e-10, Provenance::Series,
                                     "sum over |kappa|=k of C_kappa(x) equals (tr x)^k"));
    });

  for (int d = 1; d <= 5; ++d)
    run.step([&](std::vector<Record>& out) {
      int mismatches = 0;
      for (const auto& kappa : partitions_up_to(8, d))
        if (zonal_C_identity_exact(kappa) != c_kappa_identity(kappa)) ++mismatches;
      out.push_back(exact_record(tag("C_kappa(I) rational |kappa|<=8", d), mismatches, 0, Provenance::ClosedForm,
                                 "C_kappa(I_d) product formula equals the coefficient expansion at I_d"));
    });

  run.step([&](std::vector<Record>& out) {
    const std::vector<double> e{0.3, 0.9, 1.4};
    out.push_back(relative_record("exp(tr x) partial sum, weight 30", exp_trace_partial_sum(e, 30), std::exp(2.6),
                                  1e-12, Provenance::Series, "e^{tr x} = sum C_kappa(x) / |kappa|!"));
  });

  const std::int64_t n = std::max<std::int64_t>(cfg.trials, 1000);
  for (int t = 0; t < 4; ++t)
    run.step([&](std::vector<Record>& out) {
      const int d = 2 + t % 2;
      const SymMatrix x = random_pd(d, rng, 0.5, 2.0);
      auto ex = uniform_spectrum(d, rng, -1.0, 2.0);
      std::sort(ex.begin(), ex.end(), std::greater<>());
      const double p = std::uniform_real_distribution<double>(-0.5, 1.0)(rng);
      const auto rep = zonal_lemma_checks(x, ex, p, n, rng, cfg.threads);
      for (const auto& c : rep.checks) {
        Record r;
        r.name = "Phi lemma " + c.name + " #" + std::to_string(t) + " d=" + std::to_string(d);
        r.value = c.lhs.mean;
        r.expected = c.rhs.mean;
        r.error = std::abs(c.lhs.mean - c.rhs.mean);
        r.tolerance = 4.0 * std::hypot(c.lhs.std_error, c.rhs.std_error);
        r.metric = Metric::Sigma;
        r.pass = c.pass;
        r.provenance = Provenance::MonteCarlo;
        r.anchor = "Haar-average identity for Phi_kappa: " + c.name;
        out.push_back(r);
      }
    });
}

// -------------------------------------------------------------------- d2

void d2_suite(Runner& run, const RunConfig& cfg, Rng& rng) {
  const std::array<std::array<double, 3>, 5> pts{{{3, 1, 0}, {2, 0.5, 0.5}, {1.5, 0, 0}, {4, 2, 1}, {2.5, -1, 0.5}}};
  for (const auto& q : pts)
    run.step([&](std::vector<Record>& out) {
      const std::string nm = "m(1,2,2) Laplace at (" + format_double(q[0]) + "," + format_double(q[1]) + "," +
                             format_double(q[2]) + ")";
      out.push_back(relative_record(nm, m122_laplace_quadrature(q[0], q[1], q[2]), m122_laplace(q[0], q[1], q[2]),
                                    1e-3, Provenance::Quadrature,
                                    "sheet g(2 sqrt(y^2+z^2)) plus density f integrate to "
                                    "(a^2-b^2-c^2)^{-1/2} exp(2a/(a^2-b^2-c^2))"));
    });

  for (double s : {0.5, 1.0, 2.0, 5.0})
    run.step([&](std::vector<Record>& out) {
      out.push_back(relative_record("m(1,1,1) Laplace at s=" + format_double(s), m111_laplace_quadrature(s),
                                    m111_laplace(s), 1e-8, Provenance::Quadrature,
                                    "cosh(2 sqrt l) / sqrt(pi l) integrates to s^{-1/2} e^{1/s}"));
    });

  const std::array<ConePoint2, 3> cps{{{1, 0, 0}, {2, 0.5, 0.3}, {0.7, 0.69, 0}}};
  for (const auto& p : cps)
    run.step([&](std::vector<Record>& out) {
      const double f = m122_ac_density(p);
      const std::string at = " at (" + format_double(p.x) + "," + format_double(p.y) + "," + format_double(p.z) + ")";
      out.push_back(relative_record("f summation orders" + at, m122_ac_density_by_degree(p), f, 1e-11,
                                    Provenance::Series, "double series for f, k-outer vs total degree"));
      const double e[] = {p.x - p.radius(), p.x + p.radius()};
      out.push_back(relative_record("f vs 2 sqrt 2 f_2" + at, kConeJacobian2 * density_fd_spectrum(e).value, f, 1e-10,
                                    Provenance::Series, "f = f_2 in cone coordinates (Jacobian 2 sqrt 2)"));
    });

  for (int n = 1; n <= 8; ++n)
    run.step([&](std::vector<Record>& out) {
      const auto r = faa_di_bruno_check(n, {1.3, 0.4, -0.7});
      out.push_back(bool_record("Faa di Bruno exact n=" + std::to_string(n), r.exact_match, Provenance::ClosedForm,
                                "closed forms of d^n/dx^n (x^2-y^2-z^2)^n and ^(n-1) vs exact expansion"));
      out.push_back(max_error_record("Faa di Bruno finite differences n=" + std::to_string(n), r.fd_rel_err, 1e-6,
                                     Provenance::ClosedForm, "closed forms vs extrapolated finite differences"));
    });

  run.step([&](std::vector<Record>& out) {
    // Nonzero eigenvalue of r (d = 2) carries the weighted law cosh(2 sqrt l) dl.
    auto mass = [](double t) {
      const double st = std::sqrt(t);
      return st * std::sinh(2 * st) - 0.5 * (std::cosh(2 * st) - 1.0);
    };
    const double edges[] = {0.0, 0.5, 1.0, 2.0};
    for (int b = 0; b < 3; ++b) {
      const auto est = mc_mean(std::max<std::int64_t>(cfg.trials, 1000), rng, cfg.threads, [&](Rng& r) {
        const auto w = singular_r_sample(2, r);
        const double lam = w.matrix.trace();
        return (lam >= edges[b] && lam < edges[b + 1]) ? w.weight : 0.0;
      });
      out.push_back(sigma_record("r eigenvalue mass [" + format_double(edges[b]) + "," + format_double(edges[b + 1]) +
                                     ")",
                                 est, mass(edges[b + 1]) - mass(edges[b]), 4.0, Provenance::MonteCarlo,
                                 "singular part of m(1,2,2) pushes forward to cosh(2 sqrt l) dl"));
    }
  });
}

// -------------------------------------------------------------------- fd

void fd_suite(Runner& run, const RunConfig& cfg, Rng& rng) {
  for (int d = 2; d <= 3; ++d)
    for (int t = 0; t < 5; ++t)
      run.step([&](std::vector<Record>& out) {
        const SymMatrix s = random_pd(d, rng, 0.5, 3.0);
        const double want = laplace_m(s, {double(d - 1), d, d});
        double prev = INFINITY, got = 0.0;
        bool monotone = true;
        for (int w = 10; w <= 40; w += 10) {
          const TruncationPolicy fixed{w, cfg.trunc.rel_tol, TruncationPolicy::Mode::FixedWeight};
          got = laplace_fd_series(s, fixed).value + singular_r_laplace(s, fixed).value;
          const double err = std::abs(got - want) / want;
          // Once at the rounding floor the error only jitters.
          monotone = monotone && (err <= prev || err <= kRoundoffFloor);
          prev = err;
        }
        const std::string nm = tag("r + f_d = m(d-1,d,d) #" + std::to_string(t), d);
        out.push_back(relative_record(nm + " weight 40", got, want, 1e-8, Provenance::Series,
                                      "LT of r plus LT of f_d equals (det s)^{-(d-1)/2} e^{tr s^{-1}}"));
        out.push_back(bool_record(nm + " monotone sweep 10..40", monotone, Provenance::Series,
                                  "truncation error decreases with weight"));
      });

  run.step([&](std::vector<Record>& out) {
    const double lf = cone_laplace_ac(3, 0, 0, [](double x, double r) {
      const double e[] = {x - r, x + r};
      return kConeJacobian2 * density_fd_spectrum(e).value;
    });
    out.push_back(relative_record("f_2 Laplace at s=3I", lf, laplace_fd_series(3.0 * SymMatrix::identity(2)).value,
                                  1e-3, Provenance::Quadrature, "quadrature of f_2 vs its series Laplace transform"));
  });

  run.step([&](std::vector<Record>& out) {
    const double lt = cone_laplace_ac(2, 0, 0, [](double x, double r) {
      const double e[] = {x - r, x + r};
      return kConeJacobian2 * density_m_fullrank_spectrum(e, 3.0).value;
    });
    out.push_back(relative_record("m(3,2,2) density Laplace at s=2I", lt,
                                  laplace_m(2.0 * SymMatrix::identity(2), {3.0, 2, 2}), 1e-3, Provenance::Quadrature,
                                  "full-rank density series integrates to (det s)^{-p} e^{tr s^{-1}}"));
  });

  for (int d = 2; d <= 3; ++d)
    run.step([&](std::vector<Record>& out) {
      const SymMatrix s = random_pd(d, rng, 0.8, 1.6);
      out.push_back(sigma_record(tag("r Laplace, weighted sampler", d),
                                 singular_r_laplace_mc(s, std::max<std::int64_t>(cfg.trials, 1000), rng,
                                                       {cfg.threads, false}),
                                 singular_r_laplace(s, cfg.trunc).value, 4.0, Provenance::MonteCarlo,
                                 "sampled r (Haar rotation of m(d-1,d-1,d-1)) vs its series Laplace transform"));
    });
}

// --------------------------------------------------------------- support

bool table_exists(double two_p, int k, int d) {
  if (d == 1) return true;
  if (two_p >= d - 1) return true;
  const double n = std::round(two_p);
  return std::abs(two_p - n) < 1e-12 && n >= 1 && k <= n;
}

void support_suite(Runner& run, const RunConfig& cfg, Rng& rng) {
  run.step([&](std::vector<Record>& out) {
    int mismatches = 0;
    for (int d = 1; d <= 6; ++d)
      for (int h = 1; h <= 2 * (d + 1); ++h)
        for (int k = 0; k <= d; ++k)
          if (exists_m({0.5 * h, k, d}).exists != table_exists(0.5 * h, k, d)) ++mismatches;
    out.push_back(exact_record("existence table d<=6", mismatches, 0, Provenance::ClosedForm,
                               "exists iff 2p >= d-1, or 2p = n integer with rank w <= n"));
  });

  run.step([&](std::vector<Record>& out) {
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
      const int d = 1 + t % 4;
      NcwParams p{d + 0.5, SymMatrix(d), random_pd(d, rng, 0.3, 2.0)};
      for (int i = 0; i < t % (d + 1); ++i) {
        Eigen::VectorXd v(d);
        for (int j = 0; j < d; ++j) v(j) = std_normal(rng);
        p.w += SymMatrix(Eigen::MatrixXd(v * v.transpose()));
      }
      const auto red = reduce_to_canonical(p, cfg.tol);
      const SymMatrix s = random_pd(d, rng, 0.1, 3.0);
      const double want = laplace_ncw(s, p);
      worst = std::max(worst, std::abs(laplace_via_reduction(s, p, red) - want) / want);
    }
    out.push_back(max_error_record("NCW via canonical reduction", worst, 1e-10, Provenance::ClosedForm,
                                   "L_NCW(s) = L_m(q(s+b)q^T) / L_m(q b q^T)"));
  });

  const std::int64_t trials = cfg.trials;
  run.step([&](std::vector<Record>& out) {
    out.push_back(count_record("subspace intersection d=4 n=2 k=2",
                               subspace_intersection_experiment(4, 2, 2, trials, rng, false, cfg.threads).hits, trials,
                               "a Gaussian k-frame meets a fixed n-space trivially when k <= d-n"));
    out.push_back(count_record("subspace intersection d=5 n=2 k=3 (k=d-n)",
                               subspace_intersection_experiment(5, 2, 3, trials, rng, false, cfg.threads).hits, trials,
                               "a Gaussian k-frame meets a fixed n-space trivially when k <= d-n"));
    const auto ctl = subspace_intersection_experiment(4, 2, 2, std::min<std::int64_t>(trials, 1000), rng, true,
                                                      cfg.threads);
    out.push_back(exact_record("subspace intersection control", ctl.probability(), 1.0, Provenance::MonteCarlo,
                               "frames forced inside F always intersect it"));
  });

  auto diag = [](std::vector<double> v) { return SymMatrix::diagonal(v); };
  auto hist_record = [&](const std::string& nm, const RankHistogram& h, const std::string& anchor) {
    return count_record(nm + " (expected rank " + std::to_string(h.expected) + ")", h.off_target(), h.trials, anchor);
  };
  run.step([&](std::vector<Record>& out) {
    const std::string a = "rank(x0 + U y0 U^T) = min(a+b, d) for Haar U";
    out.push_back(hist_record("rank additivity d=4 a=1 b=2",
                              rank_additivity_experiment(diag({1, 0, 0, 0}), diag({0, 2, 3, 0}), trials, rng, cfg.threads),
                              a));
    out.push_back(hist_record("rank additivity d=3 a=2 b=2",
                              rank_additivity_experiment(diag({1, 2, 0}), diag({0, 1, 1}), trials, rng, cfg.threads), a));
    out.push_back(hist_record("rank additivity y0=0",
                              rank_additivity_experiment(diag({1, 2, 0}), SymMatrix(3), trials, rng, cfg.threads), a));
  });
  run.step([&](std::vector<Record>& out) {
    const std::string a = "m(a,k,d) * m(b,0,d) is carried by rank min(a+b, d)";
    out.push_back(hist_record("convolution a=1 k=1 b=1 d=3",
                              convolution_support_experiment({1.0, 1, 3}, 1, trials, rng, cfg.threads), a));
    out.push_back(hist_record("convolution a=2 k=1 b=1 d=3",
                              convolution_support_experiment({2.0, 1, 3}, 1, trials, rng, cfg.threads), a));
    out.push_back(hist_record("convolution a=2 k=2 b=0 d=4",
                              convolution_support_experiment({2.0, 2, 4}, 0, trials, rng, cfg.threads), a));
  });
  for (int d = 2; d <= 4; ++d)
    run.step([&](std::vector<Record>& out) {
      out.push_back(hist_record(tag("r sample ranks", d), singular_r_rank_experiment(d, trials, rng, cfg.threads),
                                "r is carried by matrices of rank d-1"));
    });

  run.step([&](std::vector<Record>& out) {
    const std::int64_t n = std::max<std::int64_t>(trials, 1000);
    for (int t = 0; t < 3; ++t) {
      const int d = 2 + t;
      NcwParams p{double(d + t % 2), SymMatrix(d), random_pd(d, rng, 0.3, 1.5)};
      Eigen::VectorXd v(d);
      for (int j = 0; j < d; ++j) v(j) = 0.6 * std_normal(rng);
      p.w = SymMatrix(Eigen::MatrixXd(v * v.transpose()));
      const SymMatrix s = random_pd(d, rng, 0.2, 1.2);
      out.push_back(sigma_record(tag("NCW sampler Laplace #" + std::to_string(t), d),
                                 ncw_laplace_mc(s, p, n, rng, cfg.threads), laplace_ncw(s, p), 4.0,
                                 Provenance::MonteCarlo, "sum of Gaussian outer products has the NCW Laplace transform"));
    }
    for (const MeasureSpec& spec : {MeasureSpec{2.0, 1, 2}, MeasureSpec{3.0, 2, 3}}) {
      const SymMatrix s = random_pd(spec.d, rng, 0.7, 1.5);
      out.push_back(sigma_record("weighted " + spec.to_string() + " Laplace",
                                 m_laplace_mc(s, spec, n, rng, {cfg.threads, false}), laplace_m(s, spec), 4.0,
                                 Provenance::MonteCarlo,
                                 "2^{dn/2} e^{2k} e^{tr x/2} NCW(n, 2I(k,d), I) has Laplace transform of m(n,k,d)"));
    }
  });
}

}  // namespace

std::optional<Suite> parse_suite(const std::string& name) {
  if (name == "zonal") return Suite::Zonal;
  if (name == "d2") return Suite::D2;
  if (name == "fd") return Suite::Fd;
  if (name == "support") return Suite::Support;
  if (name == "all") return Suite::All;
  return std::nullopt;
}

Report cmd_verify(Suite suite, const RunConfig& cfg) {
  cfg.validate();
  Report report;
  report.command = "verify";
  static const char* names[] = {"zonal", "d2", "fd", "support", "all"};
  report.inputs["suite"] = names[static_cast<int>(suite)];
  report.inputs["seed"] = cfg.seed;
  report.inputs["trials"] = cfg.trials;
  report.inputs["tol"] = cfg.tol;
  report.inputs["weight_max"] = cfg.trunc.weight_max;
  report.inputs["rel_tol"] = cfg.trunc.rel_tol;

  Runner run(report, cfg);
  // Each suite gets its own stream so "all" reproduces the individual suites.
  auto stream = [&](int i) { return Rng(cfg.seed + 0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(i + 1)); };
  if (suite == Suite::Zonal || suite == Suite::All) {
    Rng r = stream(0);
    zonal_suite(run, cfg, r);
  }
  if (suite == Suite::D2 || suite == Suite::All) {
    Rng r = stream(1);
    d2_suite(run, cfg, r);
  }
  if (suite == Suite::Fd || suite == Suite::All) {
    Rng r = stream(2);
    fd_suite(run, cfg, r);
  }
  if (suite == Suite::Support || suite == Suite::All) {
    Rng r = stream(3);
    support_suite(run, cfg, r);
  }
  report.seconds = run.elapsed();
  return report;
}

}  // namespace ncw::harness
