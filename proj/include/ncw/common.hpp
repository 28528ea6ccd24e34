// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace ncw {

/// Every stochastic routine takes one of these explicitly; there is no global
/// generator.
using Rng = std::mt19937_64;

/// Argument outside the mathematical domain of an operation (pole of a gamma
/// factor, non-positive minor, point outside the cone, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The requested measure or distribution does not exist for these parameters.
class ExistenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An adaptive series did not meet its relative tolerance before the weight
/// cap. Carries the partial sum reached.
class TruncationError : public std::runtime_error {
 public:
  TruncationError(const std::string& what, double partial, int weight)
      : std::runtime_error(what), partial_value(partial), weight_reached(weight) {}
  double partial_value;
  int weight_reached;
};

/// Monte-Carlo mean with its standard error.
struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t n = 0;
};

/// Mean and standard error of a batch of per-draw values.
McEstimate summarize(std::span<const double> values);

/// Number of shards a Monte-Carlo loop of `total` items is split into. Fixed
/// by `total` alone so results do not depend on the thread count.
int shard_count(std::int64_t total);

/// Draws one independent seed per shard from `rng`.
std::vector<std::uint64_t> shard_seeds(Rng& rng, int shards);

/// Runs body(shard, begin, end) for each shard of [0, total), on up to
/// `threads` worker threads (0 = hardware concurrency).
void for_shards(std::int64_t total, int threads,
                const std::function<void(int, std::int64_t, std::int64_t)>& body);

/// Standard normal draw. Stateless, so a draw depends only on `rng`.
/// Mean and standard error of draw(rng) over n draws. Shards get seeds taken
/// from `rng` in order, so the result does not depend on `threads`.
template <class Draw>
McEstimate mc_mean(std::int64_t n, Rng& rng, int threads, Draw draw) {
  if (n < 2) throw std::invalid_argument("Monte-Carlo estimate needs n >= 2");
  std::vector<double> values(static_cast<std::size_t>(n));
  const auto seeds = shard_seeds(rng, shard_count(n));
  for_shards(n, threads, [&](int shard, std::int64_t begin, std::int64_t end) {
    Rng local(seeds[static_cast<std::size_t>(shard)]);
    for (std::int64_t i = begin; i < end; ++i) values[static_cast<std::size_t>(i)] = draw(local);
  });
  return summarize(values);
}

inline double std_normal(Rng& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); }

}  // namespace ncw
