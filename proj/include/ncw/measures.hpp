// SPDX-License-Identifier: Apache-2.0
#pragma once

// Existence classification, closed-form Laplace transforms, the reduction
// of NCW(2p, w, Sigma) to the canonical measures m(2p, k, d), and the
// explicit densities known for these measures.
//
// Matrix densities are with respect to the isometric Lebesgue measure of
// lebesgue_coords. The d = 2 cone densities are with respect to dx dy dz in
// cone coordinates (x, y, z); the two differ by kConeJacobian2.

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "ncw/symcore.hpp"
#include "ncw/zonal.hpp"

namespace ncw {

// ------------------------------------------------------------------ types

struct MeasureSpec {
  double two_p = 0.0;
  int k = 0;
  int d = 1;
  /// Throws std::invalid_argument unless d >= 1, 0 <= k <= d, two_p > 0.
  void validate() const;
  std::string to_string() const;
};

struct NcwParams {
  double two_p = 0.0;
  SymMatrix w{1};
  SymMatrix sigma{1};
  int d() const { return sigma.dim(); }
  /// Shapes agree, two_p > 0, sigma positive definite, w in the closed cone
  /// up to `tol` relative to its largest entry.
  void validate(double tol = 1e-10) const;
};

enum class Reason { ShapeNotInLambda, RankExceedsShape, OK_IntegerShape, OK_ContinuousShape };
std::string_view reason_name(Reason r);

struct ExistenceVerdict {
  bool exists = false;
  Reason reason = Reason::ShapeNotInLambda;
  std::string citation;  // the clause of the criterion that decided
};

/// Tolerance used to snap 2p to the nearest integer.
inline constexpr double kHalfIntegerTol = 1e-9;

/// The integer n if |two_p - n| <= kHalfIntegerTol.
std::optional<int> integer_shape(double two_p);

/// Whether m(2p, k, d) exists:
///   2p >= d - 1: always;
///   2p = n in {1, ..., d - 2}: iff k <= n;
///   otherwise: no.
/// For d = 1 every 2p > 0 is admissible.
ExistenceVerdict exists_m(const MeasureSpec& spec);

/// Same rule with k = rank(w). Throws DomainError if sigma is not positive
/// definite. `rank_tol` is relative to the largest eigenvalue of w.
ExistenceVerdict exists_ncw(const NcwParams& params, double rank_tol = 1e-10);

// --------------------------------------------------------- Laplace transforms

/// det(I + 2 Sigma s)^{-p} exp(-tr(2 s (I + 2 Sigma s)^{-1} w)).
double laplace_ncw(const SymMatrix& s, const NcwParams& params);

/// (det s)^{-p} exp(tr(s^{-1} I(k, d))), and its logarithm.
double laplace_m(const SymMatrix& s, const MeasureSpec& spec);
double log_laplace_m(const SymMatrix& s, const MeasureSpec& spec);

/// q and b with laplace_ncw(s) = L(q (s + b) q^T) / L(q b q^T), L the
/// transform of m(2p, k, d), b = (2 Sigma)^{-1} and
/// 2 (2 Sigma)^{-1} w (2 Sigma)^{-1} = q^{-1} I(k, d) q^{-T}.
struct CanonicalReduction {
  Eigen::MatrixXd q;
  SymMatrix b{1};
  int k = 0;
  double residual = 0.0;  // max-abs error of the defining identity, relative to its scale
  std::optional<std::string> warning;
};

/// `tol` is the relative eigenvalue threshold used for rank(w).
CanonicalReduction reduce_to_canonical(const NcwParams& params, double tol = 1e-10);

/// Applies the reduction: L(q (s + b) q^T) / L(q b q^T).
double laplace_via_reduction(const SymMatrix& s, const NcwParams& params, const CanonicalReduction& red);

// ------------------------------------------------------------------ series

struct TruncationPolicy {
  enum class Mode { FixedWeight, AdaptiveTail };
  int weight_max = 64;
  double rel_tol = 1e-10;
  Mode mode = Mode::AdaptiveTail;
  void validate() const;
};

struct SeriesValue {
  double value = 0.0;
  int weight_reached = 0;
};

/// (2 pi)^{-d(d-1)/4}: converts the series densities, whose natural
/// reference measure is the one in which the Gamma_d-normalized Laplace
/// identity holds, to the isometric Lebesgue measure.
double lebesgue_normalization(int d);

/// Density of m(2p, d, d), 2p > d - 1, at x positive definite:
/// (det x)^{p-(d+1)/2} sum_kappa C_kappa(x) / (|kappa|! Gamma_d(kappa + p)).
SeriesValue density_m_fullrank(const SymMatrix& x, double two_p, const TruncationPolicy& trunc = {});
SeriesValue density_m_fullrank_spectrum(std::span<const double> eigs, double two_p,
                                        const TruncationPolicy& trunc = {});

/// Absolutely continuous part f_d of m(d - 1, d, d) (d >= 2):
/// sum over m_d > 0 of C_kappa(t) / det(t) / (|kappa|! Gamma_d(kappa + (d-1)/2)).
/// The quotient by det(t) is taken monomial by monomial, so the value stays
/// finite on the boundary of the cone.
SeriesValue density_fd(const SymMatrix& t, const TruncationPolicy& trunc = {});
SeriesValue density_fd_spectrum(std::span<const double> eigs, const TruncationPolicy& trunc = {});

/// One term of the f_d series (without the Lebesgue normalization).
double density_fd_term(std::span<const double> eigs, const Partition& kappa);

/// Laplace transform of f_d: (det s)^{-(d-1)/2} sum_{m_d > 0} C_kappa(s^{-1}) / |kappa|!.
SeriesValue laplace_fd_series(const SymMatrix& s, const TruncationPolicy& trunc = {});

/// Laplace transform of the singular part r: same sum over m_d = 0.
SeriesValue singular_r_laplace(const SymMatrix& s, const TruncationPolicy& trunc = {});

// -------------------------------------------------------------------- d = 2

/// dx_iso = kConeJacobian2 dx dy dz under phi2.
inline constexpr double kConeJacobian2 = 2.8284271247461903;  // 2 sqrt(2)

/// g(z) = 2 cosh(2 sqrt z) / (pi z), z > 0.
double m122_g(double z);
/// g(2 sqrt(y^2 + z^2)), the density of the boundary sheet of m(1, 2, 2) in
/// the (y, z) chart. DomainError at the origin.
double m122_singular_density(double y, double z);
/// Absolutely continuous density of m(1, 2, 2) in cone coordinates,
/// summed k-outer, m-inner. DomainError outside the open cone.
double m122_ac_density(const ConePoint2& p, double rel_tol = 1e-12);
/// Same density summed by total degree n, an independent ordering.
double m122_ac_density_by_degree(const ConePoint2& p, double rel_tol = 1e-12);
/// Laplace transform of m(1, 2, 2) in cone coordinates:
/// (a^2 - b^2 - c^2)^{-1/2} exp(2a / (a^2 - b^2 - c^2)).
double m122_laplace(double a, double b, double c);

/// m(1, 1, 1) density cosh(2 sqrt(lambda)) / sqrt(pi lambda).
double m111_density(double lambda);
/// s^{-1/2} exp(1/s).
double m111_laplace(double s);

// ------------------------------------------------------------ quadrature

/// int_C exp(-2ax - 2by - 2cz) h(x, r) dx dy dz for a density depending on
/// (x, r = sqrt(y^2 + z^2)) only. Requires a > sqrt(b^2 + c^2).
/// `growth` bounds log h(x, r) <= growth * sqrt(x) for large x.
double cone_laplace_ac(double a, double b, double c, const std::function<double(double x, double r)>& h,
                       double growth = 8.0, double rel_tol = 1e-10);
/// Same integral for a measure on the boundary sheet x = r with density
/// sheet(r) dy dz.
double cone_laplace_sheet(double a, double b, double c, const std::function<double(double r)>& sheet,
                          double growth = 8.0, double rel_tol = 1e-10);
/// Full Laplace transform of m(1, 2, 2) by quadrature (sheet plus density).
double m122_laplace_quadrature(double a, double b, double c, double rel_tol = 1e-10);
/// int_0^inf exp(-s lambda) m111_density(lambda) d lambda by quadrature.
double m111_laplace_quadrature(double s);

/// exp(-x) I_0(x) for x >= 0.
double bessel_i0_scaled(double x);

// ------------------------------------------------------------ Faa di Bruno

/// Closed forms of d^n/dx^n (x^2 - y^2 - z^2)^n and (x^2 - y^2 - z^2)^{n-1}
/// compared with exact polynomial differentiation and with extrapolated
/// finite differences.
struct FaaReport {
  int n = 0;
  ConePoint2 point;
  double closed_n = 0.0;        // closed form, exponent n
  double closed_nm1 = 0.0;      // closed form, exponent n - 1
  bool exact_match = false;     // both closed forms equal the exact derivatives
  double fd_rel_err = 0.0;      // max relative error against finite differences
};

/// 1 <= n <= 10.
FaaReport faa_di_bruno_check(int n, const ConePoint2& point);

}  // namespace ncw
