#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace geomopt {

/// 17 significant digits; "inf", "-inf" and "nan" for non-finite values.
std::string format_real(double v);

/// An empty cell prints as "NA".
using CsvCell = std::variant<std::monostate, double, std::uint64_t, std::string>;

CsvCell cell(std::optional<double> v);

/// Comma-separated table with LF line endings. The header is always written.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  /// Throws InputError when the cell count differs from the header.
  void add_row(std::vector<CsvCell> row);
  const std::vector<std::string>& header() const noexcept { return header_; }
  std::size_t size() const noexcept { return rows_.size(); }

  /// `comment`, when given, becomes a leading "# ..." line.
  std::string render(const std::optional<std::string>& comment = std::nullopt) const;
  void write(const std::string& path, const std::optional<std::string>& comment = std::nullopt) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<CsvCell>> rows_;
};

}  // namespace geomopt
