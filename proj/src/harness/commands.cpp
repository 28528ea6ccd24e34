// SPDX-License-Identifier: Apache-2.0
#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>

#include "CLI11.hpp"
#include "ncw/harness.hpp"
#include "ncw/samplers.hpp"

namespace ncw::harness {

namespace {

std::string verdict_text(const ExistenceVerdict& v) {
  return std::string(v.exists ? "exists" : "not-exists") + " (" + std::string(reason_name(v.reason)) +
         "): " + v.citation;
}

nlohmann::ordered_json matrix_json(const SymMatrix& m) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (int i = 0; i < m.dim(); ++i) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (int j = 0; j < m.dim(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

Report cmd_exist(int d, double two_p, std::optional<int> k, const std::optional<SymMatrix>& w,
                 const std::optional<SymMatrix>& sigma) {
  Report rep;
  rep.command = "exist";
  rep.inputs["d"] = d;
  rep.inputs["two_p"] = two_p;
  ExistenceVerdict v;
  if (w) {
    const SymMatrix sg = sigma ? *sigma : SymMatrix::identity(w->dim());
    const NcwParams params{two_p, *w, sg};
    params.validate();
    rep.inputs["d"] = params.d();
    rep.inputs["w"] = matrix_json(*w);
    rep.inputs["sigma"] = matrix_json(sg);
    v = exists_ncw(params);
  } else {
    rep.inputs["k"] = k.value_or(0);
    v = exists_m({two_p, k.value_or(0), d});
  }
  rep.results.push_back(info_record("exists", v.exists ? 1.0 : 0.0, Provenance::ClosedForm,
                                    std::string(reason_name(v.reason)) + ": " + v.citation));
  rep.inputs["verdict"] = verdict_text(v);
  return rep;
}

Report cmd_laplace(const LaplaceRequest& req, const RunConfig& cfg) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  if (!is_positive_definite(req.s)) throw DomainError("laplace: s must be positive definite");
  Report rep;
  rep.command = "laplace";
  rep.inputs["s"] = matrix_json(req.s);
  rep.inputs["seed"] = cfg.seed;
  Rng rng(cfg.seed);
  const std::string closed = "closed form";
  if (req.spec) {
    const MeasureSpec& spec = *req.spec;
    spec.validate();
    if (spec.d != req.s.dim()) throw std::invalid_argument("laplace: s has the wrong dimension");
    rep.inputs["measure"] = spec.to_string();
    const auto v = exists_m(spec);
    if (!v.exists) rep.warnings.push_back("measure does not exist: " + verdict_text(v));
    const double value = laplace_m(req.s, spec);
    rep.results.push_back(info_record("laplace", value, Provenance::ClosedForm, "(det s)^{-p} e^{tr(s^{-1} I(k,d))}"));
    if (req.cross_check) {
      const auto n = integer_shape(spec.two_p);
      if (spec.d == 2 && n == 1 && spec.k == 2) {
        // m(1,2,2): sheet plus density by quadrature in cone coordinates.
        const ConePoint2 abc = phi2_inverse(req.s);
        rep.results.push_back(relative_record("cone quadrature", m122_laplace_quadrature(abc.x, abc.y, abc.z), value,
                                              1e-3, Provenance::Quadrature,
                                              "singular sheet plus absolutely continuous part vs " + closed));
      } else if (!n || spec.k > *n) {
        rep.warnings.push_back("cross-check needs an integer shape with k <= 2p; skipped");
      } else if (!(req.s.eigenvalues().minCoeff() > 0.5)) {
        rep.warnings.push_back("weighted cross-check needs s > I/2; skipped");
      } else {
        rep.results.push_back(sigma_record("weighted Monte-Carlo", m_laplace_mc(req.s, spec, cfg.trials, rng,
                                                                                 {cfg.threads, false}),
                                           value, 4.0, Provenance::MonteCarlo,
                                           "weighted NCW(n, 2I(k,d), I) sample vs " + closed));
      }
    }
  } else {
    const NcwParams& p = *req.ncw;
    p.validate(cfg.tol);
    if (p.d() != req.s.dim()) throw std::invalid_argument("laplace: s has the wrong dimension");
    rep.inputs["two_p"] = p.two_p;
    rep.inputs["w"] = matrix_json(p.w);
    rep.inputs["sigma"] = matrix_json(p.sigma);
    const auto v = exists_ncw(p);
    if (!v.exists) rep.warnings.push_back("distribution does not exist: " + verdict_text(v));
    const double value = laplace_ncw(req.s, p);
    rep.results.push_back(info_record("laplace", value, Provenance::ClosedForm,
                                      "det(I+2 sigma s)^{-p} exp(-tr(2s(I+2 sigma s)^{-1} w))"));
    if (req.cross_check) {
      const auto red = reduce_to_canonical(p, cfg.tol);
      rep.results.push_back(relative_record("canonical reduction", laplace_via_reduction(req.s, p, red), value, 1e-10,
                                            Provenance::ClosedForm, "L_m(q(s+b)q^T) / L_m(q b q^T) vs " + closed));
      if (integer_shape(p.two_p) && v.exists) {
        rep.results.push_back(sigma_record("Gaussian-sum Monte-Carlo", ncw_laplace_mc(req.s, p, cfg.trials, rng,
                                                                                     cfg.threads),
                                           value, 4.0, Provenance::MonteCarlo, "sampled NCW vs " + closed));
      } else {
        rep.warnings.push_back("Monte-Carlo cross-check needs an integer shape; skipped");
      }
    }
  }
  rep.seconds = since(t0);
  return rep;
}

void cmd_sample(const SampleRequest& req, const RunConfig& cfg, std::ostream& out) {
  cfg.validate();
  if (req.count < 1) throw std::invalid_argument("sample: count must be >= 1");
  Rng rng(cfg.seed);
  int d = req.d;
  std::function<WeightedSample(Rng&)> draw;
  switch (req.target) {
    case SampleTarget::Ncw: {
      if (req.w) d = req.w->dim();
      else if (req.sigma) d = req.sigma->dim();
      const NcwParams p{req.two_p, req.w ? *req.w : SymMatrix(d), req.sigma ? *req.sigma : SymMatrix::identity(d)};
      p.validate();
      const auto v = exists_ncw(p);
      if (!v.exists) throw RefusedError("NCW does not exist: " + verdict_text(v));
      if (!integer_shape(p.two_p)) throw RefusedError("the Gaussian-sum sampler needs an integer 2p");
      auto sampler = std::make_shared<NcwSampler>(p);
      draw = [sampler](Rng& r) {
        FactorDraw f = sampler->draw(r);
        return WeightedSample{f.matrix, 1.0, 0.0, std::move(f.factor)};
      };
      break;
    }
    case SampleTarget::M: {
      const MeasureSpec spec{req.two_p, req.k, d};
      spec.validate();
      const auto v = exists_m(spec);
      if (!v.exists) throw RefusedError(spec.to_string() + " does not exist: " + verdict_text(v));
      const auto n = integer_shape(spec.two_p);
      if (!n) throw RefusedError("the weighted sampler needs an integer 2p");
      draw = [spec](Rng& r) { return m_measure_sample(spec, r); };
      break;
    }
    case SampleTarget::SingularR:
      if (d < 2) throw RefusedError("the singular part r is defined for d >= 2");
      draw = [d](Rng& r) { return singular_r_sample(d, r); };
      break;
  }

  const auto names = lebesgue_coord_names(d);
  for (const auto& nm : names) out << nm << ',';
  out << "weight\n";
  for (std::int64_t i = 0; i < req.count; ++i) {
    const WeightedSample w = draw(rng);
    const Eigen::VectorXd c = lebesgue_coords(w.matrix);
    for (int j = 0; j < c.size(); ++j) out << format_double(c(j)) << ',';
    out << format_double(w.weight) << '\n';
  }
}

// ---------------------------------------------------------------------- CLI

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Noncentral Wishart existence, Laplace transforms, samplers and verification suites"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  RunConfig cfg;
  std::string format = "json";
  std::string output;
  app.add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  app.add_option("--threads", cfg.threads, "Worker threads (0 = all cores)")->capture_default_str();
  app.add_option("--trials", cfg.trials, "Monte-Carlo draws or trials per check")->capture_default_str();
  app.add_option("--tol", cfg.tol, "Rank tolerance relative to the largest eigenvalue")->capture_default_str();
  app.add_option("--weight-max", cfg.trunc.weight_max, "Series weight cap")->capture_default_str();
  app.add_option("--rel-tol", cfg.trunc.rel_tol, "Series relative tail tolerance")->capture_default_str();
  app.add_option("--max-seconds", cfg.max_seconds, "Stop verify after this long (0 = no cap)");
  app.add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  app.add_option("--output,-o", output, "Write the report or samples here instead of stdout");

  // exist
  auto* ex = app.add_subcommand("exist", "Existence of m(2p,k,d) or NCW(2p,w,sigma)");
  int ex_d = 0, ex_k = 0;
  double ex_two_p = 0.0;
  std::string ex_w, ex_sigma;
  ex->add_option("--d", ex_d, "Dimension");
  ex->add_option("--two-p", ex_two_p, "Shape 2p")->required();
  ex->add_option("--k", ex_k, "Rank of the noncentrality");
  ex->add_option("--w-file", ex_w, "Noncentrality matrix file")->check(CLI::ExistingFile);
  ex->add_option("--sigma-file", ex_sigma, "Covariance matrix file (default identity)")->check(CLI::ExistingFile);

  // laplace
  auto* lp = app.add_subcommand("laplace", "Closed-form Laplace transform with optional cross-checks");
  int lp_d = 0, lp_k = 0;
  double lp_two_p = 0.0, lp_s_scalar = 0.0;
  std::string lp_w, lp_sigma, lp_s;
  bool lp_cross = false;
  lp->add_option("--d", lp_d, "Dimension (needed with --s-scalar and no matrix files)");
  lp->add_option("--two-p", lp_two_p, "Shape 2p")->required();
  lp->add_option("--k", lp_k, "k of m(2p,k,d)");
  lp->add_option("--w-file", lp_w, "NCW noncentrality file")->check(CLI::ExistingFile);
  lp->add_option("--sigma-file", lp_sigma, "NCW covariance file")->check(CLI::ExistingFile);
  auto* s_file = lp->add_option("--s-file", lp_s, "Argument s")->check(CLI::ExistingFile);
  lp->add_option("--s-scalar", lp_s_scalar, "Use s = c I_d")->excludes(s_file);
  lp->add_flag("--cross-check", lp_cross, "Add Monte-Carlo and reduction cross-checks");

  // verify
  auto* vf = app.add_subcommand("verify", "Run a verification suite");
  std::string suite_name = "all";
  vf->add_option("--suite", suite_name, "Suite")
      ->check(CLI::IsMember({"zonal", "d2", "fd", "support", "all"}))
      ->capture_default_str();

  // sample
  auto* sp = app.add_subcommand("sample", "Write draws as CSV (lebesgue coordinates, then weight)");
  std::string target = "ncw";
  SampleRequest sreq;
  std::string sp_w, sp_sigma;
  sp->add_option("--target", target, "Target")->check(CLI::IsMember({"ncw", "m", "singular-r"}))->capture_default_str();
  sp->add_option("--d", sreq.d, "Dimension");
  sp->add_option("--two-p,--n", sreq.two_p, "Shape 2p (an integer n for sampling)");
  sp->add_option("--k", sreq.k, "k for target m");
  sp->add_option("--w-file", sp_w, "NCW noncentrality file")->check(CLI::ExistingFile);
  sp->add_option("--sigma-file", sp_sigma, "NCW covariance file")->check(CLI::ExistingFile);
  sp->add_option("--count", sreq.count, "Number of draws")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  cfg.format = format == "csv" ? Format::Csv : Format::Json;
  if (!output.empty()) cfg.output_path = output;

  Report rep;
  try {
    cfg.validate();
    auto load = [&](const std::string& path) -> std::optional<SymMatrix> {
      if (path.empty()) return std::nullopt;
      return read_matrix_file(path, &rep.warnings);
    };
    if (*ex) {
      if (ex_w.empty() && ex_d < 1) throw std::invalid_argument("exist: give --d (and --k) or --w-file");
      const auto w = load(ex_w);
      const auto sg = load(ex_sigma);
      auto warnings = std::move(rep.warnings);
      rep = cmd_exist(ex_d, ex_two_p, ex_k, w, sg);
      rep.warnings.insert(rep.warnings.begin(), warnings.begin(), warnings.end());
      err << rep.inputs["verdict"].get<std::string>() << '\n';
    } else if (*lp) {
      LaplaceRequest req;
      const auto w = load(lp_w);
      const auto sg = load(lp_sigma);
      int d = lp_d;
      if (w) d = w->dim();
      else if (sg) d = sg->dim();
      if (!lp_s.empty()) {
        req.s = *load(lp_s);
      } else if (lp_s_scalar > 0.0 && d >= 1) {
        req.s = lp_s_scalar * SymMatrix::identity(d);
      } else {
        throw std::invalid_argument("laplace: give --s-file, or --s-scalar with a dimension");
      }
      if (d < 1) d = req.s.dim();
      if (w || sg) req.ncw = NcwParams{lp_two_p, w ? *w : SymMatrix(d), sg ? *sg : SymMatrix::identity(d)};
      else req.spec = MeasureSpec{lp_two_p, lp_k, d};
      req.cross_check = lp_cross;
      auto warnings = std::move(rep.warnings);
      rep = cmd_laplace(req, cfg);
      rep.warnings.insert(rep.warnings.begin(), warnings.begin(), warnings.end());
    } else if (*vf) {
      rep = cmd_verify(*parse_suite(suite_name), cfg);
      for (const auto& r : rep.results)
        if (!r.pass) err << "FAIL " << r.name << " [" << r.anchor << "]\n";
      err << (rep.all_pass() ? "all " : "") << rep.results.size() << " records, "
          << (rep.all_pass() ? "pass" : "failures present") << (rep.incomplete ? " (incomplete)" : "") << '\n';
    } else if (*sp) {
      sreq.target = target == "ncw" ? SampleTarget::Ncw : target == "m" ? SampleTarget::M : SampleTarget::SingularR;
      sreq.w = load(sp_w);
      sreq.sigma = load(sp_sigma);
      for (const auto& w : rep.warnings) err << "warning: " << w << '\n';
      if (cfg.output_path) {
        std::ofstream file(*cfg.output_path);
        if (!file) throw std::runtime_error("cannot write " + cfg.output_path->string());
        cmd_sample(sreq, cfg, file);
      } else {
        cmd_sample(sreq, cfg, out);
      }
      return 0;
    }
  } catch (const RefusedError& e) {
    err << "refused: " << e.what() << '\n';
    return 1;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  for (const auto& w : rep.warnings) err << "warning: " << w << '\n';
  rep.write(cfg, out);
  return rep.exit_code();
}

}  // namespace ncw::harness
