// SPDX-License-Identifier: Apache-2.0
#pragma once

// Partitions, powered leading-minor products and their orthogonal averages,
// the multivariate gamma function and Pochhammer symbol, exact zonal
// polynomials and the exponential-trace expansion.

#include <boost/multiprecision/cpp_int.hpp>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ncw/common.hpp"
#include "ncw/symcore.hpp"

namespace ncw {

using Rational = boost::multiprecision::cpp_rational;

// ---------------------------------------------------------------- partitions

/// Non-increasing sequence (m_1 >= ... >= m_d >= 0) living in E_d. Always
/// stored padded with zeros to exactly `ambient()` entries.
class Partition {
 public:
  Partition() = default;
  /// Throws std::invalid_argument if parts increase, are negative, or have
  /// more non-zero entries than ambient_d.
  Partition(std::vector<int> parts, int ambient_d);

  int ambient() const { return static_cast<int>(parts_.size()); }
  int weight() const;
  /// Number of positive parts.
  int length() const;
  /// True when m_d > 0.
  bool full_length() const { return !parts_.empty() && parts_.back() > 0; }
  int operator[](int i) const { return parts_[static_cast<std::size_t>(i)]; }
  std::span<const int> parts() const { return parts_; }
  /// Positive parts only.
  std::vector<int> nonzero_parts() const;
  /// Same positive parts in ambient dimension d (must fit).
  Partition with_ambient(int d) const;

  std::string to_string() const;

  friend bool operator==(const Partition&, const Partition&) = default;
  /// Lexicographic on the padded parts.
  friend std::strong_ordering operator<=>(const Partition& a, const Partition& b) {
    return a.parts_ <=> b.parts_;
  }

 private:
  std::vector<int> parts_;
};

/// True if a is dominated by b (partial sums of a never exceed those of b).
bool dominated_by(std::span<const int> a, std::span<const int> b);

/// Partitions of exactly `weight` with at most d parts, lexicographically
/// descending.
std::vector<Partition> partitions_of(int weight, int d);

/// Every partition in E_d with weight <= weight_max, weight-major and
/// lexicographically descending within a weight.
std::vector<Partition> partitions_up_to(int weight_max, int d);

/// Restartable stream over partitions_up_to(weight_max, d).
class PartitionStream {
 public:
  PartitionStream(int weight_max, int d);
  std::optional<Partition> next();
  void reset();

 private:
  int weight_max_;
  int d_;
  int weight_ = 0;
  std::vector<Partition> block_;
  std::size_t pos_ = 0;
};

// ------------------------------------------------------------ minors, Phi

/// Delta_kappa(x) = prod_k Delta_k(x)^(m_k - m_{k+1}) with Delta_k the
/// leading principal minors and m_{d+1} = 0. Exponents may be any reals;
/// minors come from a Cholesky recursion. Throws DomainError if a minor
/// carrying a nonzero exponent is not positive.
double delta_kappa(const SymMatrix& x, std::span<const double> exponents);
double delta_kappa(const SymMatrix& x, const Partition& kappa);

/// Monte-Carlo estimate of Phi_kappa(x) = E_u[Delta_kappa(u x u^T)] over `n`
/// Haar draws. Exact (std_error 0) when x is a multiple of the identity.
McEstimate phi_kappa_mc(const SymMatrix& x, std::span<const double> exponents, std::int64_t n,
                        Rng& rng, int threads = 0);

struct LemmaCheck {
  std::string name;
  McEstimate lhs;
  McEstimate rhs;
  double z_score = 0.0;  // |lhs - rhs| / pooled standard error
  bool pass = false;     // z_score <= 4
};

struct LemmaReport {
  std::vector<LemmaCheck> checks;
  bool all_pass() const;
};

/// Independent Monte-Carlo estimates of both sides of three Phi identities:
///   Phi_m(x) = det(x)^{m_d} E_u[Phi_{m_1-m_d, ..., m_{d-1}-m_d}([u x u^T]_1)]
///   Phi_m(x^{-1}) = Phi_{-m_d,...,-m_1}(x)
///   Phi_m(x) det(x)^p = Phi_{m+p}(x)
/// The first uses nested Haar sampling (one inner O(d-1) draw per outer
/// draw). Requires x positive definite and d >= 2.
LemmaReport zonal_lemma_checks(const SymMatrix& x, std::span<const double> exponents, double p,
                               std::int64_t n, Rng& rng, int threads = 0);

// ------------------------------------------------------------- gamma family

/// Arguments of Gamma_d(z_1..z_d) = prod_j Gamma(z_j - (j-1)/2), optionally
/// shifted: Gamma_d(z + p) = Gamma_d(z_1 + p, ..., z_d + p).
struct GammaArgs {
  std::vector<double> z;
  std::optional<double> shift_p;
};

/// Throws DomainError at or beyond a pole (z_j - (j-1)/2 <= 0).
double multivariate_gamma(const GammaArgs& args);
double log_multivariate_gamma(const GammaArgs& args);
/// Gamma_d(kappa + p) in log form.
double log_multivariate_gamma(const Partition& kappa, double p);

/// (p)_kappa = Gamma_d(kappa + p) / Gamma_d(p) as a product of 1-D rising
/// factorials. Enforces p > (d-1)/2 unless allow_outside_domain.
double pochhammer_kappa(double p, const Partition& kappa, bool allow_outside_domain = false);
/// Exact rational value for rational p.
Rational pochhammer_kappa_exact(const Rational& p, const Partition& kappa);

// --------------------------------------------------------- zonal polynomials

/// C_kappa(I_d) from the closed product formula, exactly. Throws
/// std::invalid_argument if kappa has more than d positive parts.
Rational c_kappa_identity(const Partition& kappa);

/// Coefficients of C_kappa in the monomial symmetric basis M_lambda, for all
/// kappa of one weight with at most d parts. Row kappa is supported on
/// lambda dominated by kappa.
struct ZonalTable {
  int d = 0;
  int weight = 0;
  std::vector<Partition> partitions;          // lexicographically descending
  std::vector<std::vector<Rational>> exact;   // empty when weight > exact limit
  std::vector<std::vector<double>> coeff;     // dense rows [kappa][lambda]

  int index_of(const Partition& p) const;
};

/// Weights up to this are computed in exact rational arithmetic.
inline constexpr int kExactZonalWeight = 20;

/// Cached, thread-safe access to the coefficient table for (d, weight).
/// When the environment variable NCW_ZONAL_CACHE names a directory, tables
/// are read from / written to JSON files there.
const ZonalTable& zonal_table(int d, int weight);

/// Drops all in-memory tables (tests use this to exercise the file cache).
void clear_zonal_tables();

/// Monomial symmetric function M_lambda at the given spectrum (zero when
/// lambda has more parts than there are eigenvalues).
double monomial_symmetric(std::span<const double> eigs, std::span<const int> lambda);
Rational monomial_symmetric_at_ones(int d, std::span<const int> lambda);

/// Exact C_kappa at the identity spectrum from the coefficient table.
Rational zonal_C_identity_exact(const Partition& kappa);

/// C_kappa at the spectrum `eigs` (size must equal kappa.ambient()).
double zonal_C(std::span<const double> eigs, const Partition& kappa);

/// C_kappa(eigs) / (prod eigs)^r for 0 <= r <= m_d, evaluated without
/// division by shifting every monomial down by r.
double zonal_C_over_det(std::span<const double> eigs, const Partition& kappa, int r);

/// C_kappa(eigs) for every kappa in partitions_of(weight, d), in that order.
std::vector<double> zonal_C_weight(std::span<const double> eigs, int weight);

/// C_kappa(eigs) / (prod eigs)^r for every kappa of this weight, in the
/// order of partitions_of(weight, d). Entries with m_d < r are NaN.
std::vector<double> zonal_C_over_det_weight(std::span<const double> eigs, int weight, int r);

/// sum_{|kappa| <= weight_max} C_kappa(eigs) / |kappa|!.
double exp_trace_partial_sum(std::span<const double> eigs, int weight_max);

}  // namespace ncw
