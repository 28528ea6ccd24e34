// SPDX-License-Identifier: Apache-2.0
#pragma once

// Command-line surface: matrix file input, structured reports and the
// verification suites. run_cli is the whole tool; tools/ncw.cpp only calls it.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "ncw/measures.hpp"
#include "ncw/symcore.hpp"

namespace ncw::harness {

inline constexpr int kReportSchema = 1;
inline constexpr const char* kCodeVersion = "0.1.0";

enum class Format { Json, Csv };

struct RunConfig {
  std::uint64_t seed = 0;
  std::int64_t trials = 10000;
  TruncationPolicy trunc{};
  double tol = 1e-10;
  std::optional<std::filesystem::path> output_path;  // stdout when empty
  Format format = Format::Json;
  int threads = 0;               // 0 = all cores
  double max_seconds = 0.0;      // 0 = no cap; checked between records
  void validate() const;
};

// ------------------------------------------------------------- matrix files

/// Malformed matrix file; line and column are 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line, int column, const std::string& source = "");
  std::string detail;
  int line;
  int column;
};

/// First line d, then d lines of d reals. An asymmetric matrix is replaced by
/// (m + m^T) / 2; a warning is appended when the asymmetry exceeds 1e-12.
SymMatrix parse_matrix(std::istream& in, std::vector<std::string>* warnings = nullptr);
SymMatrix parse_matrix_string(const std::string& text, std::vector<std::string>* warnings = nullptr);
SymMatrix read_matrix_file(const std::filesystem::path& path, std::vector<std::string>* warnings = nullptr);

// ------------------------------------------------------------------ reports

enum class Provenance { ClosedForm, Series, MonteCarlo, Quadrature };
const char* provenance_name(Provenance p);

/// How `error` was computed and compared with `tolerance`.
enum class Metric { Exact, Relative, Absolute, Sigma, Count, Info };
const char* metric_name(Metric m);

struct Record {
  std::string name;
  double value = 0.0;
  double expected = 0.0;
  double error = 0.0;
  double tolerance = 0.0;
  Metric metric = Metric::Info;
  bool pass = true;
  Provenance provenance = Provenance::ClosedForm;
  std::string anchor;  // the identity this record checks
};

Record relative_record(std::string name, double value, double expected, double tol, Provenance prov,
                       std::string anchor);
/// Passes when |value - expected| <= sigmas * std_error (+ a 1e-12 relative floor).
Record sigma_record(std::string name, const McEstimate& est, double expected, double sigmas, Provenance prov,
                    std::string anchor);
/// For aggregate checks: value is the worst error found, expected 0.
Record max_error_record(std::string name, double worst, double tol, Provenance prov, std::string anchor);
Record exact_record(std::string name, double value, double expected, Provenance prov, std::string anchor);
/// Passes when value == 0 (off-target counts and the like).
Record count_record(std::string name, std::int64_t value, std::int64_t trials, std::string anchor);
Record bool_record(std::string name, bool ok, Provenance prov, std::string anchor);
Record info_record(std::string name, double value, Provenance prov, std::string anchor);

struct Report {
  std::string command;
  nlohmann::ordered_json inputs = nlohmann::ordered_json::object();
  std::vector<Record> results;
  std::vector<std::string> warnings;
  bool incomplete = false;
  double seconds = 0.0;

  bool all_pass() const;
  /// Exit status: 0 when every record passes and the run is complete.
  int exit_code() const { return all_pass() && !incomplete ? 0 : 1; }
  nlohmann::ordered_json to_json(bool with_timing = true) const;
  std::string to_csv() const;
  /// To cfg.output_path when set, otherwise to `out`.
  void write(const RunConfig& cfg, std::ostream& out) const;
};

/// Floats rendered with 17 significant digits.
std::string format_double(double v);

// ----------------------------------------------------------------- commands

/// Canonical-measure existence (k given) or NCW existence (w file given).
Report cmd_exist(int d, double two_p, std::optional<int> k, const std::optional<SymMatrix>& w,
                 const std::optional<SymMatrix>& sigma);

struct LaplaceRequest {
  std::optional<MeasureSpec> spec;     // m(2p, k, d)
  std::optional<NcwParams> ncw;        // otherwise NCW(2p, w, sigma)
  SymMatrix s{1};
  bool cross_check = false;
};
Report cmd_laplace(const LaplaceRequest& req, const RunConfig& cfg);

enum class Suite { Zonal, D2, Fd, Support, All };
std::optional<Suite> parse_suite(const std::string& name);
Report cmd_verify(Suite suite, const RunConfig& cfg);

enum class SampleTarget { Ncw, M, SingularR };

struct SampleRequest {
  SampleTarget target = SampleTarget::Ncw;
  int d = 1;
  double two_p = 1.0;
  int k = 0;
  std::optional<SymMatrix> w;
  std::optional<SymMatrix> sigma;
  std::int64_t count = 10000;
};

/// Refused when the target measure does not exist for these parameters.
class RefusedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Writes one CSV row per draw: lebesgue_coords, then the weight (1 for NCW).
/// Throws RefusedError with the classifier's clause for non-existent targets.
void cmd_sample(const SampleRequest& req, const RunConfig& cfg, std::ostream& out);

/// Full CLI. Exit codes: 0 all pass, 1 failure or refusal, 2 usage error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ncw::harness
