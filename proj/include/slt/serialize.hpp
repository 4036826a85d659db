#pragma once

// Line-oriented text format for separators:
//
//   affine d=<d>            or   poly d=<d> k=<k>
//   (<alpha>) <value>            one line per monomial, graded-lex order
//
// alpha is the exponent vector, e.g. (0,0) for the constant and (1,0) for x1.
// Values carry 17 significant digits so a write/read cycle is exact.

#include <iosfwd>
#include <string>

#include "slt/model.hpp"

namespace slt {

std::string format_real(double value);  // %.17g
double parse_real(const std::string& text);

void write_separator(std::ostream& out, const Separator& sep);
Separator read_separator(std::istream& in);

std::string separator_to_string(const Separator& sep);
Separator separator_from_string(const std::string& text);

}  // namespace slt
