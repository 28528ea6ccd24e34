// SPDX-License-Identifier: Apache-2.0
//
// Zonal polynomial coefficients in the monomial symmetric basis.
//
// For kappa of weight k, C_kappa = sum_{lambda <= kappa} c[kappa][lambda] M_lambda
// where the sum runs over lambda dominated by kappa. Off-diagonal coefficients
// follow the Laplace-Beltrami eigenfunction recurrence
//
//   c[kappa][lambda] = sum_mu ((l_i + t) - (l_j - t)) c[kappa][mu] / (rho(kappa) - rho(lambda))
//
// over the raisings mu of lambda (move t units from part j to an earlier part
// i, re-sort), with rho(kappa) = sum_i k_i (k_i - i). The leading coefficient
// is fixed by the hook-length normalization
//
//   c[kappa][kappa] = 2^k k! / prod_{cells} (2 arm + leg + 2),
//
// which makes sum_{|kappa| = k} C_kappa = (tr x)^k.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

#include "json.hpp"

#include "ncw/kernels.hpp"
#include "ncw/zonal.hpp"

namespace ncw {
namespace {

constexpr int kCacheSchema = 1;

long rho(std::span<const int> parts) {
  long r = 0;
  for (std::size_t i = 0; i < parts.size(); ++i) r += static_cast<long>(parts[i]) * (parts[i] - static_cast<long>(i + 1));
  return r;
}

template <class T>
T hook_leading_coefficient(const Partition& kappa) {
  const auto parts = kappa.nonzero_parts();
  const int k = kappa.weight();
  T value = 1;
  for (int i = 2; i <= k; ++i) value *= i;
  for (int i = 0; i < k; ++i) value *= 2;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    for (int j = 0; j < parts[i]; ++j) {
      const int arm = parts[i] - j - 1;
      int leg = 0;
      for (std::size_t r = i + 1; r < parts.size() && parts[r] > j; ++r) ++leg;
      value /= T(2 * arm + leg + 2);
    }
  }
  return value;
}

template <class T>
std::vector<std::vector<T>> build_rows(const std::vector<Partition>& parts) {
  const std::size_t n = parts.size();
  std::map<std::vector<int>, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index.emplace(std::vector<int>(parts[i].parts().begin(), parts[i].parts().end()), i);

  std::vector<std::vector<T>> rows(n, std::vector<T>(n, T(0)));
  std::vector<int> mu;
  for (std::size_t a = 0; a < n; ++a) {
    const Partition& kappa = parts[a];
    auto& row = rows[a];
    row[a] = hook_leading_coefficient<T>(kappa);
    const long rho_kappa = rho(kappa.parts());
    for (std::size_t b = a + 1; b < n; ++b) {
      const auto lambda = parts[b].parts();
      if (!dominated_by(lambda, kappa.parts())) continue;
      T acc = 0;
      const int len = parts[b].length();
      for (int i = 0; i < len; ++i) {
        for (int j = i + 1; j < len; ++j) {
          for (int t = 1; t <= lambda[j]; ++t) {
            mu.assign(lambda.begin(), lambda.end());
            mu[i] += t;
            mu[j] -= t;
            std::sort(mu.begin(), mu.end(), std::greater<>());
            const std::size_t idx = index.at(mu);
            if (idx < a) continue;  // lexicographically above kappa: not in the row
            const T& c = row[idx];
            if (c == 0) continue;
            acc += T((lambda[i] + t) - (lambda[j] - t)) * c;
          }
        }
      }
      row[b] = acc / T(rho_kappa - rho(lambda));
    }
  }
  return rows;
}

std::filesystem::path cache_file(int d, int weight) {
  const char* dir = std::getenv("NCW_ZONAL_CACHE");
  if (!dir || !*dir) return {};
  return std::filesystem::path(dir) / ("zonal_d" + std::to_string(d) + "_w" + std::to_string(weight) + ".json");
}

std::unique_ptr<ZonalTable> load_cached(const std::filesystem::path& path, int d, int weight) {
  std::ifstream in(path);
  if (!in) return nullptr;
  try {
    const auto j = nlohmann::json::parse(in);
    if (j.at("schema").get<int>() != kCacheSchema || j.at("d").get<int>() != d ||
        j.at("weight").get<int>() != weight)
      return nullptr;
    auto table = std::make_unique<ZonalTable>();
    table->d = d;
    table->weight = weight;
    table->partitions = partitions_of(weight, d);
    const auto& rows = j.at("rows");
    const std::size_t n = table->partitions.size();
    if (rows.size() != n) return nullptr;
    const bool exact = weight <= kExactZonalWeight;
    table->coeff.assign(n, std::vector<double>(n, 0.0));
    if (exact) table->exact.assign(n, std::vector<Rational>(n, Rational(0)));
    for (std::size_t a = 0; a < n; ++a) {
      if (rows[a].size() != n) return nullptr;
      for (std::size_t b = 0; b < n; ++b) {
        if (exact) {
          table->exact[a][b] = Rational(rows[a][b].get<std::string>());
          table->coeff[a][b] = static_cast<double>(table->exact[a][b]);
        } else {
          table->coeff[a][b] = rows[a][b].get<double>();
        }
      }
    }
    return table;
  } catch (const std::exception&) {
    return nullptr;
  }
}

void store_cached(const std::filesystem::path& path, const ZonalTable& table) {
  nlohmann::json j;
  j["schema"] = kCacheSchema;
  j["d"] = table.d;
  j["weight"] = table.weight;
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t a = 0; a < table.partitions.size(); ++a) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t b = 0; b < table.partitions.size(); ++b) {
      if (!table.exact.empty())
        row.push_back(table.exact[a][b].str());
      else
        row.push_back(table.coeff[a][b]);
    }
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  std::error_code ec;
  std::filesystem::create_directories(path.parent_path(), ec);
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) return;
    out << j.dump();
  }
  std::filesystem::rename(tmp, path, ec);
}

std::unique_ptr<ZonalTable> build_table(int d, int weight) {
  auto table = std::make_unique<ZonalTable>();
  table->d = d;
  table->weight = weight;
  table->partitions = partitions_of(weight, d);
  if (weight <= kExactZonalWeight) {
    table->exact = build_rows<Rational>(table->partitions);
    table->coeff.resize(table->exact.size());
    for (std::size_t a = 0; a < table->exact.size(); ++a)
      for (const auto& c : table->exact[a]) table->coeff[a].push_back(static_cast<double>(c));
  } else {
    table->coeff = build_rows<double>(table->partitions);
  }
  return table;
}

struct TableStore {
  std::mutex mu;
  std::map<std::pair<int, int>, std::unique_ptr<ZonalTable>> tables;
};

TableStore& store() {
  static TableStore s;
  return s;
}

void require_in_ambient(std::span<const double> eigs, const Partition& kappa) {
  if (static_cast<int>(eigs.size()) != kappa.ambient())
    throw std::invalid_argument("zonal: spectrum size differs from the partition's ambient dimension");
}

}  // namespace

int ZonalTable::index_of(const Partition& p) const {
  const auto it = std::lower_bound(partitions.begin(), partitions.end(), p, std::greater<>());
  if (it == partitions.end() || *it != p) return -1;
  return static_cast<int>(it - partitions.begin());
}

const ZonalTable& zonal_table(int d, int weight) {
  if (d < 1 || weight < 0) throw std::invalid_argument("zonal_table: need d >= 1 and weight >= 0");
  auto& s = store();
  std::lock_guard<std::mutex> lock(s.mu);
  auto& slot = s.tables[{d, weight}];
  if (!slot) {
    const auto path = cache_file(d, weight);
    if (!path.empty()) slot = load_cached(path, d, weight);
    if (!slot) {
      slot = build_table(d, weight);
      if (!path.empty()) store_cached(path, *slot);
    }
  }
  return *slot;
}

void clear_zonal_tables() {
  auto& s = store();
  std::lock_guard<std::mutex> lock(s.mu);
  s.tables.clear();
}

double monomial_symmetric(std::span<const double> eigs, std::span<const int> lambda) {
  const std::size_t d = eigs.size();
  std::vector<int> exps(d, 0);
  std::size_t nz = 0;
  for (int m : lambda)
    if (m > 0) {
      if (nz == d) return 0.0;
      exps[nz++] = m;
    }
  std::sort(exps.begin(), exps.end());
  double total = 0.0;
  do {
    double term = 1.0;
    for (std::size_t i = 0; i < d; ++i)
      if (exps[i]) term *= std::pow(eigs[i], exps[i]);
    total += term;
  } while (std::next_permutation(exps.begin(), exps.end()));
  return total;
}

Rational monomial_symmetric_at_ones(int d, std::span<const int> lambda) {
  std::map<int, int> mult;
  int nz = 0;
  for (int m : lambda)
    if (m > 0) {
      ++mult[m];
      ++nz;
    }
  if (nz > d) return 0;
  mult[0] += d - nz;
  boost::multiprecision::cpp_int num = 1, den = 1;
  for (int i = 2; i <= d; ++i) num *= i;
  for (const auto& [part, count] : mult)
    for (int i = 2; i <= count; ++i) den *= i;
  return Rational(num, den);
}

Rational zonal_C_identity_exact(const Partition& kappa) {
  const auto& table = zonal_table(kappa.ambient(), kappa.weight());
  if (table.exact.empty()) throw std::invalid_argument("zonal_C_identity_exact: weight beyond the exact table limit");
  const int a = table.index_of(kappa);
  Rational total = 0;
  for (std::size_t b = static_cast<std::size_t>(a); b < table.partitions.size(); ++b)
    if (table.exact[a][b] != 0) total += table.exact[a][b] * monomial_symmetric_at_ones(table.d, table.partitions[b].parts());
  return total;
}

std::vector<double> zonal_C_weight(std::span<const double> eigs, int weight) {
  const int d = static_cast<int>(eigs.size());
  const auto& table = zonal_table(d, weight);
  const std::size_t n = table.partitions.size();
  std::vector<double> m(n);
  for (std::size_t b = 0; b < n; ++b) m[b] = monomial_symmetric(eigs, table.partitions[b].parts());
  std::vector<double> out(n);
  for (std::size_t a = 0; a < n; ++a) out[a] = kernels::dot(table.coeff[a], m);
  return out;
}

std::vector<double> zonal_C_over_det_weight(std::span<const double> eigs, int weight, int r) {
  const int d = static_cast<int>(eigs.size());
  if (r < 0) throw std::invalid_argument("zonal_C_over_det_weight: r must be nonnegative");
  const auto& table = zonal_table(d, weight);
  const std::size_t n = table.partitions.size();
  // Rows with m_d >= r only touch columns with lambda_d >= r.
  std::vector<double> m(n, 0.0);
  std::vector<int> shifted(static_cast<std::size_t>(d));
  for (std::size_t b = 0; b < n; ++b) {
    const auto lambda = table.partitions[b].parts();
    if (lambda[d - 1] < r) continue;
    for (int i = 0; i < d; ++i) shifted[i] = lambda[i] - r;
    m[b] = monomial_symmetric(eigs, shifted);
  }
  std::vector<double> out(n, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t a = 0; a < n; ++a)
    if (table.partitions[a][d - 1] >= r) out[a] = kernels::dot(table.coeff[a], m);
  return out;
}

double zonal_C(std::span<const double> eigs, const Partition& kappa) {
  require_in_ambient(eigs, kappa);
  const auto& table = zonal_table(kappa.ambient(), kappa.weight());
  const int a = table.index_of(kappa);
  const std::size_t n = table.partitions.size();
  std::vector<double> m(n, 0.0);
  for (std::size_t b = static_cast<std::size_t>(a); b < n; ++b)
    if (table.coeff[a][b] != 0.0) m[b] = monomial_symmetric(eigs, table.partitions[b].parts());
  return kernels::dot(table.coeff[a], m);
}

double zonal_C_over_det(std::span<const double> eigs, const Partition& kappa, int r) {
  require_in_ambient(eigs, kappa);
  const int d = kappa.ambient();
  if (r < 0 || r > kappa[d - 1]) throw std::invalid_argument("zonal_C_over_det: need 0 <= r <= m_d");
  const auto& table = zonal_table(d, kappa.weight());
  const int a = table.index_of(kappa);
  double total = 0.0;
  std::vector<int> shifted(static_cast<std::size_t>(d));
  for (std::size_t b = static_cast<std::size_t>(a); b < table.partitions.size(); ++b) {
    const double c = table.coeff[a][b];
    if (c == 0.0) continue;
    const auto lambda = table.partitions[b].parts();
    if (lambda[d - 1] < r) throw std::logic_error("zonal_C_over_det: coefficient outside the divisible support");
    for (int i = 0; i < d; ++i) shifted[i] = lambda[i] - r;
    total += c * monomial_symmetric(eigs, shifted);
  }
  return total;
}

double exp_trace_partial_sum(std::span<const double> eigs, int weight_max) {
  if (eigs.empty()) throw std::invalid_argument("exp_trace_partial_sum: empty spectrum");
  double total = 0.0;
  double factorial = 1.0;
  for (int k = 0; k <= weight_max; ++k) {
    if (k > 0) factorial *= k;
    const auto values = zonal_C_weight(eigs, k);
    total += kernels::sum(values) / factorial;
  }
  return total;
}

}  // namespace ncw
