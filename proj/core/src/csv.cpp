#include "geomopt/csv.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>

#include "geomopt/errors.hpp"

namespace geomopt {

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", v);
}

CsvCell cell(std::optional<double> v) {
  if (!v) return std::monostate{};
  return *v;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(std::vector<CsvCell> row) {
  if (row.size() != header_.size())
    throw InputError("CSV row has " + std::to_string(row.size()) + " cells, header has " +
                     std::to_string(header_.size()));
  rows_.push_back(std::move(row));
}

namespace {

struct CellText {
  std::string operator()(std::monostate) const { return "NA"; }
  std::string operator()(double v) const { return format_real(v); }
  std::string operator()(std::uint64_t v) const { return std::to_string(v); }
  std::string operator()(const std::string& v) const { return v; }
};

}  // namespace

std::string CsvTable::render(const std::optional<std::string>& comment) const {
  std::string out;
  if (comment) out += "# " + *comment + "\n";
  for (std::size_t j = 0; j < header_.size(); ++j) out += (j ? "," : "") + header_[j];
  out += '\n';
  for (const auto& row : rows_) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out += ',';
      out += std::visit(CellText{}, row[j]);
    }
    out += '\n';
  }
  return out;
}

void CsvTable::write(const std::string& path, const std::optional<std::string>& comment) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open '" + path + "' for writing");
  out << render(comment);
  if (!out) throw InputError("failed writing '" + path + "'");
}

}  // namespace geomopt
