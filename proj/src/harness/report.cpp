// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "ncw/harness.hpp"

namespace ncw::harness {

void RunConfig::validate() const {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (threads < 0) throw std::invalid_argument("threads must be >= 0");
  if (max_seconds < 0.0) throw std::invalid_argument("max-seconds must be >= 0");
  trunc.validate();
}

const char* provenance_name(Provenance p) {
  switch (p) {
    case Provenance::ClosedForm: return "closed-form";
    case Provenance::Series: return "series";
    case Provenance::MonteCarlo: return "monte-carlo";
    case Provenance::Quadrature: return "quadrature";
  }
  return "?";
}

const char* metric_name(Metric m) {
  switch (m) {
    case Metric::Exact: return "exact";
    case Metric::Relative: return "relative";
    case Metric::Absolute: return "absolute";
    case Metric::Sigma: return "sigma";
    case Metric::Count: return "count";
    case Metric::Info: return "info";
  }
  return "?";
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Record relative_record(std::string name, double value, double expected, double tol, Provenance prov,
                       std::string anchor) {
  Record r{std::move(name), value, expected, 0.0, tol, Metric::Relative, false, prov, std::move(anchor)};
  r.error = std::abs(value - expected) / std::max(std::abs(expected), 1e-300);
  r.pass = std::isfinite(value) && r.error <= tol;
  return r;
}

Record sigma_record(std::string name, const McEstimate& est, double expected, double sigmas, Provenance prov,
                    std::string anchor) {
  Record r{std::move(name), est.mean, expected, 0.0, sigmas * est.std_error, Metric::Sigma, false, prov,
           std::move(anchor)};
  r.error = std::abs(est.mean - expected);
  r.pass = std::isfinite(est.mean) && r.error <= r.tolerance + 1e-12 * std::abs(expected);
  return r;
}

Record max_error_record(std::string name, double worst, double tol, Provenance prov, std::string anchor) {
  return Record{std::move(name), worst, 0.0, worst, tol, Metric::Relative, std::isfinite(worst) && worst <= tol, prov,
                std::move(anchor)};
}

Record exact_record(std::string name, double value, double expected, Provenance prov, std::string anchor) {
  Record r{std::move(name), value, expected, std::abs(value - expected), 0.0, Metric::Exact, value == expected, prov,
           std::move(anchor)};
  return r;
}

Record count_record(std::string name, std::int64_t value, std::int64_t trials, std::string anchor) {
  (void)trials;
  Record r{std::move(name), static_cast<double>(value), 0.0, static_cast<double>(value), 0.0, Metric::Count,
           value == 0, Provenance::MonteCarlo, std::move(anchor)};
  return r;
}

Record bool_record(std::string name, bool ok, Provenance prov, std::string anchor) {
  return Record{std::move(name), ok ? 1.0 : 0.0, 1.0, ok ? 0.0 : 1.0, 0.0, Metric::Exact, ok, prov, std::move(anchor)};
}

Record info_record(std::string name, double value, Provenance prov, std::string anchor) {
  return Record{std::move(name), value, value, 0.0, 0.0, Metric::Info, true, prov, std::move(anchor)};
}

bool Report::all_pass() const {
  for (const auto& r : results)
    if (!r.pass) return false;
  return true;
}

nlohmann::ordered_json Report::to_json(bool with_timing) const {
  using nlohmann::ordered_json;
  ordered_json j;
  j["schema"] = kReportSchema;
  j["command"] = command;
  j["inputs"] = inputs;
  ordered_json res = ordered_json::array();
  for (const auto& r : results) {
    ordered_json e;
    e["name"] = r.name;
    e["value"] = r.value;
    e["expected"] = r.expected;
    e["error"] = r.error;
    e["tolerance"] = r.tolerance;
    e["metric"] = metric_name(r.metric);
    e["pass"] = r.pass;
    e["provenance"] = provenance_name(r.provenance);
    e["anchor"] = r.anchor;
    res.push_back(std::move(e));
  }
  j["results"] = std::move(res);
  j["all_pass"] = all_pass();
  j["incomplete"] = incomplete;
  j["warnings"] = warnings;
  const char* cache = std::getenv("NCW_ZONAL_CACHE");
  j["versions"] = {{"code", kCodeVersion}, {"zonal_cache", cache ? cache : "memory"}};
  if (with_timing) j["timing"] = {{"seconds", seconds}};
  return j;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string Report::to_csv() const {
  std::ostringstream os;
  os << "name,value,expected,error,tolerance,metric,pass,provenance,anchor\n";
  for (const auto& r : results)
    os << csv_field(r.name) << ',' << format_double(r.value) << ',' << format_double(r.expected) << ','
       << format_double(r.error) << ',' << format_double(r.tolerance) << ',' << metric_name(r.metric) << ','
       << (r.pass ? "true" : "false") << ',' << provenance_name(r.provenance) << ',' << csv_field(r.anchor) << '\n';
  return os.str();
}

void Report::write(const RunConfig& cfg, std::ostream& os) const {
  const std::string body = cfg.format == Format::Json ? to_json().dump(2) + "\n" : to_csv();
  if (!cfg.output_path) {
    os << body;
    return;
  }
  std::ofstream out(*cfg.output_path);
  if (!out) throw std::runtime_error("cannot write " + cfg.output_path->string());
  out << body;
}

}  // namespace ncw::harness
