// SPDX-License-Identifier: Apache-2.0
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "ncw/harness.hpp"

namespace ncw::harness {

ParseError::ParseError(const std::string& msg, int line_, int column_, const std::string& source)
    : std::runtime_error((source.empty() ? "" : source + ": ") + "line " + std::to_string(line_) + ", column " +
                         std::to_string(column_) + ": " + msg),
      detail(msg),
      line(line_),
      column(column_) {}

namespace {

struct Token {
  std::string text;
  int column;  // 1-based
};

std::vector<Token> split(const std::string& line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size()) break;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    out.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
  }
  return out;
}

double parse_real(const Token& t, int line) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(t.text.c_str(), &end);
  if (end == t.text.c_str() || *end != '\0')
    throw ParseError("expected a real number, got '" + t.text + "'", line, t.column + static_cast<int>(end - t.text.c_str()));
  if (errno == ERANGE || !std::isfinite(v)) throw ParseError("value out of range: '" + t.text + "'", line, t.column);
  return v;
}

}  // namespace

SymMatrix parse_matrix(std::istream& in, std::vector<std::string>* warnings) {
  std::string line;
  int lineno = 0;
  auto next_nonblank = [&](std::vector<Token>& toks) {
    while (std::getline(in, line)) {
      ++lineno;
      toks = split(line);
      if (!toks.empty()) return true;
    }
    return false;
  };

  std::vector<Token> toks;
  if (!next_nonblank(toks)) throw ParseError("empty matrix file", lineno + 1, 1);
  if (toks.size() != 1) throw ParseError("first line must hold only the dimension d", lineno, toks[1].column);
  char* end = nullptr;
  const long d = std::strtol(toks[0].text.c_str(), &end, 10);
  if (*end != '\0' || d < 1 || d > 64)
    throw ParseError("dimension must be an integer in [1, 64]", lineno, toks[0].column);

  Eigen::MatrixXd m(d, d);
  for (long i = 0; i < d; ++i) {
    if (!next_nonblank(toks)) throw ParseError("expected " + std::to_string(d) + " matrix rows", lineno + 1, 1);
    if (static_cast<long>(toks.size()) != d) {
      const int col = static_cast<long>(toks.size()) > d ? toks[static_cast<std::size_t>(d)].column
                                                         : static_cast<int>(line.size()) + 1;
      throw ParseError("expected " + std::to_string(d) + " entries, found " + std::to_string(toks.size()), lineno, col);
    }
    for (long j = 0; j < d; ++j) m(i, j) = parse_real(toks[static_cast<std::size_t>(j)], lineno);
  }
  if (next_nonblank(toks)) throw ParseError("unexpected content after the matrix", lineno, toks[0].column);

  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 && warnings)
    warnings->push_back("matrix asymmetric by " + format_double(asym) + "; replaced by (m + m^T) / 2");
  return SymMatrix(m, std::numeric_limits<double>::infinity());
}

SymMatrix parse_matrix_string(const std::string& text, std::vector<std::string>* warnings) {
  std::istringstream in(text);
  return parse_matrix(in, warnings);
}

SymMatrix read_matrix_file(const std::filesystem::path& path, std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open matrix file " + path.string());
  try {
    return parse_matrix(in, warnings);
  } catch (const ParseError& e) {
    throw ParseError(e.detail, e.line, e.column, path.string());
  }
}

}  // namespace ncw::harness
