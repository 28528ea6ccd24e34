// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <thread>

#include "ncw/common.hpp"
#include "ncw/kernels.hpp"

namespace ncw {

McEstimate summarize(std::span<const double> values) {
  McEstimate out;
  out.n = static_cast<std::int64_t>(values.size());
  if (values.empty()) return out;
  out.mean = kernels::sum(values) / static_cast<double>(values.size());
  if (values.size() > 1) {
    const double var = kernels::sum_sq_dev(values, out.mean) / static_cast<double>(values.size() - 1);
    out.std_error = std::sqrt(var / static_cast<double>(values.size()));
  }
  return out;
}

int shard_count(std::int64_t total) {
  if (total <= 0) return 1;
  return static_cast<int>(std::min<std::int64_t>(64, (total + 1023) / 1024));
}

std::vector<std::uint64_t> shard_seeds(Rng& rng, int shards) {
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(shards));
  for (auto& s : seeds) s = rng();
  return seeds;
}

void for_shards(std::int64_t total, int threads,
                const std::function<void(int, std::int64_t, std::int64_t)>& body) {
  const int shards = shard_count(total);
  auto range = [&](int s) {
    const std::int64_t begin = total * s / shards;
    const std::int64_t end = total * (s + 1) / shards;
    body(s, begin, end);
  };
  int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, shards);
  if (workers == 1) {
    for (int s = 0; s < shards; ++s) range(s);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (int s = w; s < shards; s += workers) range(s);
    });
  for (auto& t : pool) t.join();
}

}  // namespace ncw
