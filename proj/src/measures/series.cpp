// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <tuple>

#include "ncw/kernels.hpp"
#include "ncw/measures.hpp"

namespace ncw {

void TruncationPolicy::validate() const {
  if (weight_max < 0) throw std::invalid_argument("TruncationPolicy: weight_max must be >= 0");
  if (mode == Mode::AdaptiveTail && !(rel_tol > 0.0))
    throw std::invalid_argument("TruncationPolicy: AdaptiveTail needs rel_tol > 0");
}

double lebesgue_normalization(int d) {
  return std::pow(2.0 * std::numbers::pi, -0.25 * d * (d - 1));
}

namespace {

// Sums weight blocks in order. AdaptiveTail stops once a block is both
// smaller than the previous one and below rel_tol of the running sum; all
// series here have positive terms, so this is a heuristic stopping rule and
// not a bound.
template <class Block>
SeriesValue sum_blocks(const TruncationPolicy& t, int first_weight, const char* what, Block block) {
  t.validate();
  double total = 0.0;
  double prev = std::numeric_limits<double>::infinity();
  for (int w = first_weight; w <= t.weight_max; ++w) {
    const double b = block(w);
    total += b;
    if (t.mode == TruncationPolicy::Mode::AdaptiveTail && w > first_weight && b <= prev &&
        b <= t.rel_tol * total)
      return {total, w};
    prev = b;
  }
  if (t.mode == TruncationPolicy::Mode::AdaptiveTail)
    throw TruncationError(std::string(what) + ": series did not reach rel_tol by the weight cap", total,
                          t.weight_max);
  return {total, t.weight_max};
}

// log(1 / (|kappa|! Gamma_d(kappa + p))) for every kappa of one weight,
// cached per (d, p, weight). NaN where Gamma_d has a pole.
const std::vector<double>& log_coefficients(int d, double p, int weight) {
  static std::mutex mu;
  static std::map<std::tuple<int, double, int>, std::vector<double>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto [it, inserted] = cache.try_emplace({d, p, weight});
  if (inserted) {
    const double lf = std::lgamma(weight + 1.0);
    for (const auto& kappa : partitions_of(weight, d)) {
      bool pole = false;
      for (int j = 0; j < d; ++j) pole = pole || kappa[j] + p - 0.5 * j <= 0.0;
      it->second.push_back(pole ? std::numeric_limits<double>::quiet_NaN()
                                : -lf - log_multivariate_gamma(kappa, p));
    }
  }
  return it->second;
}

std::vector<double> spectrum_of(const SymMatrix& x) {
  const Eigen::VectorXd ev = x.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

void require_positive(std::span<const double> eigs, const char* what) {
  if (eigs.empty()) throw std::invalid_argument(std::string(what) + ": empty spectrum");
  for (double e : eigs)
    if (!(e > 0.0) || !std::isfinite(e)) throw DomainError(std::string(what) + ": matrix must be positive definite");
}

// Sum of C_kappa(eigs) / |kappa|! over one weight, split by m_d.
std::pair<double, double> exp_block_split(std::span<const double> eigs, int weight) {
  const int d = static_cast<int>(eigs.size());
  const auto values = zonal_C_weight(eigs, weight);
  const auto parts = partitions_of(weight, d);
  double full = 0.0, singular = 0.0;
  for (std::size_t i = 0; i < parts.size(); ++i) (parts[i][d - 1] > 0 ? full : singular) += values[i];
  const double f = std::exp(-std::lgamma(weight + 1.0));
  return {full * f, singular * f};
}

}  // namespace

SeriesValue density_m_fullrank_spectrum(std::span<const double> eigs, double two_p, const TruncationPolicy& trunc) {
  require_positive(eigs, "density_m_fullrank");
  const int d = static_cast<int>(eigs.size());
  if (!(two_p > d - 1)) throw DomainError("density_m_fullrank: need 2p > d - 1");
  const double p = 0.5 * two_p;
  double logdet = 0.0;
  for (double e : eigs) logdet += std::log(e);
  auto block = [&](int w) {
    const auto values = zonal_C_weight(eigs, w);
    const auto& lc = log_coefficients(d, p, w);
    double b = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) b += values[i] * std::exp(lc[i]);
    return b;
  };
  SeriesValue s = sum_blocks(trunc, 0, "density_m_fullrank", block);
  s.value *= std::exp((p - 0.5 * (d + 1)) * logdet) * lebesgue_normalization(d);
  return s;
}

SeriesValue density_m_fullrank(const SymMatrix& x, double two_p, const TruncationPolicy& trunc) {
  return density_m_fullrank_spectrum(spectrum_of(x), two_p, trunc);
}

double density_fd_term(std::span<const double> eigs, const Partition& kappa) {
  const int d = static_cast<int>(eigs.size());
  if (kappa.ambient() != d || !kappa.full_length())
    throw std::invalid_argument("density_fd_term: kappa must have d positive parts");
  const double p = 0.5 * (d - 1);
  return zonal_C_over_det(eigs, kappa, 1) * std::exp(-std::lgamma(kappa.weight() + 1.0) -
                                                    log_multivariate_gamma(kappa, p));
}

SeriesValue density_fd_spectrum(std::span<const double> eigs, const TruncationPolicy& trunc) {
  const int d = static_cast<int>(eigs.size());
  if (d < 2) throw std::invalid_argument("density_fd: need d >= 2");
  for (double e : eigs)
    if (!(e >= 0.0) || !std::isfinite(e)) throw DomainError("density_fd: eigenvalues must be nonnegative");
  const double p = 0.5 * (d - 1);
  auto block = [&](int w) {
    const auto values = zonal_C_over_det_weight(eigs, w, 1);
    const auto& lc = log_coefficients(d, p, w);
    double b = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
      if (!std::isnan(values[i])) b += values[i] * std::exp(lc[i]);
    return b;
  };
  SeriesValue s = sum_blocks(trunc, d, "density_fd", block);
  s.value *= lebesgue_normalization(d);
  return s;
}

SeriesValue density_fd(const SymMatrix& t, const TruncationPolicy& trunc) {
  return density_fd_spectrum(spectrum_of(t), trunc);
}

namespace {

SeriesValue lt_series(const SymMatrix& s, const TruncationPolicy& trunc, bool full_part, const char* what) {
  const int d = s.dim();
  if (d < 2) throw std::invalid_argument(std::string(what) + ": need d >= 2");
  const double logdet = s.log_det();
  const auto inv = spectrum_of(s.inverse());
  require_positive(inv, what);
  auto block = [&](int w) {
    const auto [full, singular] = exp_block_split(inv, w);
    return full_part ? full : singular;
  };
  SeriesValue v = sum_blocks(trunc, full_part ? d : 0, what, block);
  v.value *= std::exp(-0.5 * (d - 1) * logdet);
  return v;
}

}  // namespace

SeriesValue laplace_fd_series(const SymMatrix& s, const TruncationPolicy& trunc) {
  return lt_series(s, trunc, true, "laplace_fd_series");
}

SeriesValue singular_r_laplace(const SymMatrix& s, const TruncationPolicy& trunc) {
  return lt_series(s, trunc, false, "singular_r_laplace");
}

}  // namespace ncw
