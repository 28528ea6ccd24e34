// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "ncw/harness.hpp"
#include "test_util.hpp"

using namespace ncw;
using namespace ncw::harness;

namespace {

struct CliResult {
  int code;
  std::string out, err;
};

CliResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), "ncw");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("ncw_test_" + name);
  std::ofstream(path) << text;
  return path.string();
}

std::vector<std::vector<double>> parse_csv_rows(const std::string& text, std::string* header) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  if (header) *header = line;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST_CASE("matrix file parsing") {
  const SymMatrix m = parse_matrix_string("2\n1 0.5\n0.5 3\n");
  CHECK(m(0, 1) == 0.5);
  CHECK(m(1, 1) == 3.0);
  CHECK(parse_matrix_string("\n1\n\n 2.5 \n\n")(0, 0) == 2.5);

  auto error_at = [](const std::string& text) {
    try {
      parse_matrix_string(text);
    } catch (const ParseError& e) {
      return std::pair{e.line, e.column};
    }
    return std::pair{0, 0};
  };
  CHECK(error_at("2\n1 2\n2 x3\n") == std::pair{3, 3});
  CHECK(error_at("2\n1 2\n2 3 4\n") == std::pair{3, 5});
  CHECK(error_at("2\n1 2\n") == std::pair{3, 1});
  CHECK(error_at("0\n") == std::pair{1, 1});
  CHECK(error_at("2 2\n1 0\n0 1\n") == std::pair{1, 3});
  CHECK(error_at("1\n1\n7\n") == std::pair{3, 1});
  CHECK(error_at("1\n1.5e\n") == std::pair{2, 4});  // the dangling exponent

  std::vector<std::string> warnings;
  const SymMatrix a = parse_matrix_string("2\n2 1\n1.001 1\n", &warnings);
  REQUIRE(warnings.size() == 1u);
  CHECK(a(0, 1) == doctest::Approx(1.0005));
  CHECK(a(1, 0) == a(0, 1));
  warnings.clear();
  parse_matrix_string("2\n2 1\n1.0000000000000002 1\n", &warnings);
  CHECK(warnings.empty());

  const auto path = write_temp("bad.txt", "2\n1 2\n2 x\n");
  try {
    read_matrix_file(path);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find(path) != std::string::npos);
    CHECK(e.line == 3);
  }
}

TEST_CASE("report serialisation") {
  Report r;
  r.command = "test";
  r.inputs["x"] = 1;
  r.results.push_back(relative_record("a", 1.0 / 3.0, 1.0 / 3.0, 1e-12, Provenance::Series, "anchor a"));
  r.results.push_back(sigma_record("b", McEstimate{1.1, 0.1, 100}, 1.0, 4.0, Provenance::MonteCarlo, "anchor, b"));
  r.results.push_back(count_record("c", 0, 10, "anchor c"));
  CHECK(r.all_pass());
  CHECK(r.exit_code() == 0);

  const auto j = r.to_json();
  CHECK(j["schema"] == 1);
  CHECK(j["results"].size() == 3u);
  CHECK(j["results"][1]["provenance"] == "monte-carlo");
  CHECK(j["results"][0]["anchor"] == "anchor a");
  CHECK(j.contains("timing"));
  CHECK(j.contains("versions"));
  CHECK_FALSE(r.to_json(false).contains("timing"));

  const std::string csv = r.to_csv();
  CHECK(csv.find("0.33333333333333331") != std::string::npos);  // 17 significant digits
  CHECK(csv.find("\"anchor, b\"") != std::string::npos);
  CHECK(std::stod(format_double(0.1)) == 0.1);
  CHECK(format_double(1.0 / 3.0).size() == 19u);

  r.results.push_back(relative_record("d", 1.1, 1.0, 1e-3, Provenance::Quadrature, "anchor d"));
  CHECK_FALSE(r.all_pass());
  CHECK(r.exit_code() == 1);
  Report inc;
  inc.incomplete = true;
  CHECK(inc.exit_code() == 1);
}

TEST_CASE("exist command") {
  auto a = cli({"exist", "--d", "3", "--two-p", "1", "--k", "2"});
  CHECK(a.code == 0);
  CHECK(a.err.find("not-exists") != std::string::npos);
  CHECK(a.err.find("2p=n<=d-2 => rank w<=n") != std::string::npos);
  auto ja = nlohmann::json::parse(a.out);
  CHECK(ja["results"][0]["value"] == 0.0);

  auto b = cli({"exist", "--d", "5", "--two-p", "4.5"});
  CHECK(b.err.rfind("exists", 0) == 0);
  auto c = cli({"exist", "--d", "2", "--two-p", "1", "--k", "2"});
  CHECK(c.err.rfind("exists", 0) == 0);

  const auto w = write_temp("w.txt", "3\n1 1 0\n1 1 0\n0 0 0\n");
  auto d = cli({"exist", "--two-p", "1", "--w-file", w});
  CHECK(d.err.rfind("exists", 0) == 0);
  const auto w2 = write_temp("w2.txt", "3\n1 0 0\n0 1 0\n0 0 0\n");
  CHECK(cli({"exist", "--two-p", "1", "--w-file", w2}).err.find("RankExceedsShape") != std::string::npos);

  const auto bad = write_temp("bad2.txt", "3\n1 0 0\n0 1 0\n0 0\n");
  auto e = cli({"exist", "--two-p", "1", "--w-file", bad});
  CHECK(e.code == 2);
  CHECK(e.err.find("line 4") != std::string::npos);
  CHECK(cli({"exist"}).code == 2);
  CHECK(cli({}).code == 2);
  CHECK(cli({"nonsense"}).code == 2);
  CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("laplace command") {
  auto a = cli({"laplace", "--two-p", "1", "--k", "2", "--d", "2", "--s-scalar", "2", "--cross-check"});
  CHECK(a.code == 0);
  const auto j = nlohmann::json::parse(a.out);
  CHECK(j["results"][0]["value"].get<double>() == doctest::Approx(std::exp(1.0) / 2).epsilon(1e-15));
  CHECK(j["results"][1]["provenance"] == "quadrature");
  CHECK(j["results"][1]["pass"] == true);

  // d = 1 NCW against the scalar formula.
  const auto s = write_temp("s1.txt", "1\n0.9\n");
  const auto w = write_temp("w1.txt", "1\n1.3\n");
  const auto sg = write_temp("sg1.txt", "1\n0.7\n");
  auto b = cli({"laplace", "--two-p", "3", "--w-file", w, "--sigma-file", sg, "--s-file", s, "--cross-check",
                "--trials", "20000", "--format", "csv"});
  CHECK(b.code == 0);
  std::string header;
  std::istringstream in(b.out);
  std::getline(in, header);
  std::string first;
  std::getline(in, first);
  const double want = std::pow(1 + 2 * 0.7 * 0.9, -1.5) * std::exp(-2 * 0.9 * 1.3 / (1 + 2 * 0.7 * 0.9));
  const double got = std::stod(first.substr(first.find(',') + 1));
  CHECK(got == doctest::Approx(want).epsilon(1e-14));
  CHECK(b.out.find("monte-carlo") != std::string::npos);

  auto c = cli({"laplace", "--two-p", "2", "--k", "1", "--d", "2", "--s-scalar", "1", "--cross-check", "--trials",
                "50000"});
  CHECK(c.code == 0);
  CHECK(nlohmann::json::parse(c.out)["results"][1]["provenance"] == "monte-carlo");

  const auto neg = write_temp("neg.txt", "2\n1 0\n0 -1\n");
  CHECK(cli({"laplace", "--two-p", "2", "--k", "1", "--s-file", neg}).code == 2);
}

TEST_CASE("sample command") {
  auto refused = cli({"sample", "--target", "m", "--two-p", "1", "--k", "2", "--d", "3"});
  CHECK(refused.code == 1);
  CHECK(refused.err.find("2p=n<=d-2 => rank w<=n") != std::string::npos);

  auto ncw = cli({"sample", "--target", "ncw", "--d", "3", "--n", "2", "--count", "10000", "--seed", "3"});
  CHECK(ncw.code == 0);
  std::string header;
  auto rows = parse_csv_rows(ncw.out, &header);
  CHECK(rows.size() == 10000u);
  CHECK(header == "x11,x22,x33,s2*x12,s2*x13,s2*x23,weight");
  for (const auto& r : rows) {
    REQUIRE(r.size() == 7u);
    CHECK(sym_rank(from_lebesgue_coords(std::span(r.data(), 6), 3)) == 2);
  }
  CHECK(cli({"sample", "--target", "ncw", "--d", "3", "--n", "2", "--count", "10000", "--seed", "3"}).out == ncw.out);

  auto r = cli({"sample", "--target", "singular-r", "--d", "2", "--count", "2000"});
  CHECK(r.code == 0);
  for (const auto& row : parse_csv_rows(r.out, nullptr)) {
    const SymMatrix t = from_lebesgue_coords(std::span(row.data(), 3), 2);
    CHECK(std::abs(t.determinant()) <= 1e-12 * t.trace() * t.trace());
    CHECK(t.trace() > 0.0);
    CHECK(row[3] > 0.0);
  }
  CHECK(cli({"sample", "--target", "ncw", "--d", "3", "--two-p", "1.5"}).code == 1);
}

TEST_CASE("verify command") {
  auto a = cli({"verify", "--suite", "zonal", "--seed", "7", "--trials", "2000", "--threads", "1"});
  auto b = cli({"verify", "--suite", "zonal", "--seed", "7", "--trials", "2000", "--threads", "3"});
  CHECK(a.code == 0);
  auto ja = nlohmann::json::parse(a.out), jb = nlohmann::json::parse(b.out);
  ja.erase("timing");
  jb.erase("timing");
  CHECK(ja.dump() == jb.dump());
  for (const auto& r : ja["results"]) CHECK_FALSE(r["anchor"].get<std::string>().empty());

  auto capped = cli({"verify", "--suite", "all", "--max-seconds", "1e-9"});
  CHECK(capped.code == 1);
  CHECK(nlohmann::json::parse(capped.out)["incomplete"] == true);

  auto support = cli({"verify", "--suite", "support", "--trials", "10000", "--format", "csv"});
  CHECK(support.code == 0);
  CHECK(support.out.find(",false,") == std::string::npos);
  CHECK(cli({"verify", "--suite", "bogus"}).code == 2);
}
