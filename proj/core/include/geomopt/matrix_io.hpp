#pragma once

#include <iosfwd>
#include <string>

#include "geomopt/matrix.hpp"

namespace geomopt {

/// Text format: a "rows cols" header line, then one line of space-separated
/// reals per row. Lines starting with '#' and blank lines are ignored.
Matrix parse_matrix(std::istream& in, const std::string& source = "<stream>");
Matrix read_matrix(const std::string& path);
void write_matrix(std::ostream& out, const Matrix& m);

/// A vector file is an n x 1 or 1 x n matrix.
Vector read_vector(const std::string& path);
Vector parse_vector(std::istream& in, const std::string& source = "<stream>");

}  // namespace geomopt
