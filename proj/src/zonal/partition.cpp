// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "ncw/zonal.hpp"

namespace ncw {

Partition::Partition(std::vector<int> parts, int ambient_d) {
  if (ambient_d < 1) throw std::invalid_argument("Partition: ambient dimension must be >= 1");
  while (!parts.empty() && parts.back() == 0) parts.pop_back();
  if (static_cast<int>(parts.size()) > ambient_d)
    throw std::invalid_argument("Partition: more positive parts than the ambient dimension");
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i] < 0) throw std::invalid_argument("Partition: negative part");
    if (i > 0 && parts[i] > parts[i - 1]) throw std::invalid_argument("Partition: parts must be non-increasing");
  }
  parts.resize(static_cast<std::size_t>(ambient_d), 0);
  parts_ = std::move(parts);
}

int Partition::weight() const { return std::accumulate(parts_.begin(), parts_.end(), 0); }

int Partition::length() const {
  return static_cast<int>(std::count_if(parts_.begin(), parts_.end(), [](int m) { return m > 0; }));
}

std::vector<int> Partition::nonzero_parts() const {
  return {parts_.begin(), parts_.begin() + length()};
}

Partition Partition::with_ambient(int d) const { return Partition(nonzero_parts(), d); }

std::string Partition::to_string() const {
  std::ostringstream os;
  os << '(';
  const auto nz = nonzero_parts();
  for (std::size_t i = 0; i < nz.size(); ++i) os << (i ? "," : "") << nz[i];
  os << ')';
  return os.str();
}

bool dominated_by(std::span<const int> a, std::span<const int> b) {
  long sa = 0, sb = 0;
  const std::size_t n = std::max(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    sa += i < a.size() ? a[i] : 0;
    sb += i < b.size() ? b[i] : 0;
    if (sa > sb) return false;
  }
  return sa == sb;
}

namespace {

void enumerate(int remaining, int max_part, int slots, std::vector<int>& prefix, int d,
               std::vector<Partition>& out) {
  if (remaining == 0) {
    out.emplace_back(prefix, d);
    return;
  }
  if (slots == 0) return;
  for (int first = std::min(remaining, max_part); first >= 1; --first) {
    if (remaining - first > first * (slots - 1)) break;
    prefix.push_back(first);
    enumerate(remaining - first, first, slots - 1, prefix, d, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<Partition> partitions_of(int weight, int d) {
  if (weight < 0 || d < 1) throw std::invalid_argument("partitions_of: need weight >= 0 and d >= 1");
  std::vector<Partition> out;
  std::vector<int> prefix;
  enumerate(weight, weight, d, prefix, d, out);
  return out;
}

std::vector<Partition> partitions_up_to(int weight_max, int d) {
  std::vector<Partition> out;
  for (int w = 0; w <= weight_max; ++w) {
    auto block = partitions_of(w, d);
    out.insert(out.end(), block.begin(), block.end());
  }
  return out;
}

PartitionStream::PartitionStream(int weight_max, int d) : weight_max_(weight_max), d_(d) {
  if (weight_max < 0 || d < 1) throw std::invalid_argument("PartitionStream: need weight_max >= 0 and d >= 1");
  reset();
}

void PartitionStream::reset() {
  weight_ = 0;
  block_ = partitions_of(0, d_);
  pos_ = 0;
}

std::optional<Partition> PartitionStream::next() {
  while (pos_ >= block_.size()) {
    if (weight_ >= weight_max_) return std::nullopt;
    block_ = partitions_of(++weight_, d_);
    pos_ = 0;
  }
  return block_[pos_++];
}

}  // namespace ncw
