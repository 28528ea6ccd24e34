// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ncw/measures.hpp"

namespace ncw {

void MeasureSpec::validate() const {
  if (d < 1) throw std::invalid_argument("MeasureSpec: d must be >= 1");
  if (k < 0 || k > d) throw std::invalid_argument("MeasureSpec: need 0 <= k <= d");
  if (!(two_p > 0.0) || !std::isfinite(two_p)) throw std::invalid_argument("MeasureSpec: 2p must be positive");
}

std::string MeasureSpec::to_string() const {
  std::ostringstream os;
  os << "m(" << two_p << "," << k << "," << d << ")";
  return os.str();
}

void NcwParams::validate(double tol) const {
  if (w.dim() != sigma.dim()) throw std::invalid_argument("NcwParams: w and sigma differ in size");
  if (!(two_p > 0.0) || !std::isfinite(two_p)) throw std::invalid_argument("NcwParams: 2p must be positive");
  if (!is_positive_definite(sigma)) throw DomainError("NcwParams: sigma must be positive definite");
  const double scale = std::max(1.0, w.max_abs());
  if (cone_classify(w, tol * scale).tag == ConeTag::NotInCone)
    throw DomainError("NcwParams: w must be positive semidefinite");
}

std::string_view reason_name(Reason r) {
  switch (r) {
    case Reason::ShapeNotInLambda: return "ShapeNotInLambda";
    case Reason::RankExceedsShape: return "RankExceedsShape";
    case Reason::OK_IntegerShape: return "OK_IntegerShape";
    case Reason::OK_ContinuousShape: return "OK_ContinuousShape";
  }
  return "?";
}

std::optional<int> integer_shape(double two_p) {
  const double n = std::round(two_p);
  if (std::abs(two_p - n) <= kHalfIntegerTol) return static_cast<int>(n);
  return std::nullopt;
}

namespace {

ExistenceVerdict classify(double two_p, int k, int d) {
  const auto n = integer_shape(two_p);
  const bool integer_ok = n && *n >= 1 && k <= *n;
  auto ok = [&](std::string why) {
    return ExistenceVerdict{true, integer_ok ? Reason::OK_IntegerShape : Reason::OK_ContinuousShape, std::move(why)};
  };
  if (d == 1) return ok("d = 1: every shape 2p > 0 is admissible");
  if (d == 2) {
    if (two_p >= 1.0 - kHalfIntegerTol) return ok("d = 2: exists iff 2p >= 1");
    return {false, Reason::ShapeNotInLambda, "d = 2: exists iff 2p >= 1"};
  }
  if (two_p >= d - 1 - kHalfIntegerTol) return ok("2p >= d-1 => rank w arbitrary");
  if (!n || *n < 1) return {false, Reason::ShapeNotInLambda, "p must lie in {1/2, ..., (d-2)/2} u [(d-1)/2, inf)"};
  if (k <= *n) return ok("2p=n<=d-2 => rank w<=n");
  return {false, Reason::RankExceedsShape, "2p=n<=d-2 => rank w<=n"};
}

}  // namespace

ExistenceVerdict exists_m(const MeasureSpec& spec) {
  spec.validate();
  return classify(spec.two_p, spec.k, spec.d);
}

ExistenceVerdict exists_ncw(const NcwParams& params, double rank_tol) {
  params.validate();
  const Eigen::VectorXd ev = params.w.eigenvalues();
  const double top = std::max(0.0, ev.maxCoeff());
  int rank = 0;
  for (int i = 0; i < ev.size(); ++i) rank += ev(i) > rank_tol * top && top > 0.0;
  return classify(params.two_p, rank, params.d());
}

}  // namespace ncw
