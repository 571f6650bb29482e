#include "geomopt/matrix_io.hpp"

#include <fmt/format.h>

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "geomopt/errors.hpp"

namespace geomopt {
namespace {

bool content_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    return true;
  }
  return false;
}

}  // namespace

Matrix parse_matrix(std::istream& in, const std::string& source) {
  std::string line;
  if (!content_line(in, line)) throw InputError(source + ": missing 'rows cols' header");
  std::istringstream header(line);
  long long rows = -1, cols = -1;
  std::string extra;
  if (!(header >> rows >> cols) || (header >> extra) || rows < 0 || cols < 0)
    throw InputError(source + ": malformed header '" + line + "'");

  std::vector<double> entries;
  entries.reserve(static_cast<std::size_t>(rows * cols));
  for (long long i = 0; i < rows; ++i) {
    if (!content_line(in, line))
      throw InputError(fmt::format("{}: expected {} rows, found {}", source, rows, i));
    std::istringstream row(line);
    std::string tok;
    long long count = 0;
    while (row >> tok) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size())
        throw InputError(fmt::format("{}: row {} has a non-numeric entry '{}'", source, i + 1, tok));
      entries.push_back(v);
      ++count;
    }
    if (count != cols)
      throw InputError(fmt::format("{}: row {} has {} entries, expected {}", source, i + 1, count, cols));
  }
  if (content_line(in, line)) throw InputError(source + ": trailing data after the last row");
  return Matrix(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols), std::move(entries));
}

Matrix read_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open matrix file '" + path + "'");
  return parse_matrix(in, path);
}

void write_matrix(std::ostream& out, const Matrix& m) {
  out << m.rows() << ' ' << m.cols() << '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto r = m.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) out << (j ? " " : "") << fmt::format("{:.17g}", r[j]);
    out << '\n';
  }
}

Vector parse_vector(std::istream& in, const std::string& source) {
  const Matrix m = parse_matrix(in, source);
  if (m.rows() != 1 && m.cols() != 1 && !m.empty())
    throw InputError(source + ": a vector file must have one row or one column");
  return Vector(m.entries().begin(), m.entries().end());
}

Vector read_vector(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open vector file '" + path + "'");
  return parse_vector(in, path);
}

}  // namespace geomopt
