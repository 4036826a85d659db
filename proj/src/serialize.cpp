#include "slt/serialize.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "slt/error.hpp"

namespace slt {

namespace {

std::string format_alpha(const MultiIndex& alpha) {
  return fmt::format("({})", fmt::join(alpha, ","));
}

MultiIndex parse_alpha(const std::string& token, std::size_t line) {
  if (token.size() < 2 || token.front() != '(' || token.back() != ')') {
    throw ParseError("expected a multi-index like (1,0), got '" + token + "'",
                     line);
  }
  MultiIndex alpha;
  std::stringstream ss(token.substr(1, token.size() - 2));
  std::string part;
  while (std::getline(ss, part, ',')) {
    int e = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), e);
    if (ec != std::errc() || ptr != part.data() + part.size() || e < 0) {
      throw ParseError("bad exponent '" + part + "'", line);
    }
    alpha.push_back(e);
  }
  return alpha;
}

std::size_t parse_header_field(const std::string& token, const char* key,
                               std::size_t line) {
  const std::string prefix = std::string(key) + "=";
  if (token.rfind(prefix, 0) != 0) {
    throw ParseError("expected " + prefix + "<value> in header", line);
  }
  std::size_t v = 0;
  const char* first = token.data() + prefix.size();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw ParseError("bad header value '" + token + "'", line);
  }
  return v;
}

}  // namespace

std::string format_real(double value) { return fmt::format("{:.17g}", value); }

double parse_real(const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw InvalidInput("not a number: '" + text + "'");
  }
  if (used != text.size()) throw InvalidInput("not a number: '" + text + "'");
  return v;
}

void write_separator(std::ostream& out, const Separator& sep) {
  if (const auto* a = std::get_if<AffineSeparator>(&sep)) {
    const std::size_t d = a->w.size();
    out << "affine d=" << d << '\n';
    MultiIndex alpha(d, 0);
    out << format_alpha(alpha) << ' ' << format_real(a->b) << '\n';
    for (std::size_t i = 0; i < d; ++i) {
      alpha.assign(d, 0);
      alpha[i] = 1;
      out << format_alpha(alpha) << ' ' << format_real(a->w[i]) << '\n';
    }
    return;
  }
  const auto& p = std::get<PolynomialSeparator>(sep);
  out << "poly d=" << p.input_dim() << " k=" << p.degree() << '\n';
  const auto& exps = p.basis().exponents();
  for (std::size_t i = 0; i < exps.size(); ++i) {
    out << format_alpha(exps[i]) << ' ' << format_real(p.coeffs()[i]) << '\n';
  }
}

Separator read_separator(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };
  if (!next_line()) throw ParseError("empty model file", line_no);
  std::istringstream header(line);
  std::string kind, d_tok, k_tok;
  header >> kind >> d_tok;
  std::size_t d = parse_header_field(d_tok, "d", line_no);
  if (d == 0) throw ParseError("dimension must be positive", line_no);
  int k = 1;
  if (kind == "poly") {
    header >> k_tok;
    k = static_cast<int>(parse_header_field(k_tok, "k", line_no));
    if (k < 1) throw ParseError("degree must be at least 1", line_no);
  } else if (kind != "affine") {
    throw ParseError("unknown model kind '" + kind + "'", line_no);
  }

  const MonomialBasis basis(d, k);
  Vector coeffs(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (!next_line()) throw ParseError("model file ends early", line_no);
    std::istringstream row(line);
    std::string alpha_tok, value_tok;
    row >> alpha_tok >> value_tok;
    if (parse_alpha(alpha_tok, line_no) != basis.exponents()[i]) {
      throw ParseError("multi-index out of order, expected " +
                           format_alpha(basis.exponents()[i]),
                       line_no);
    }
    try {
      coeffs[i] = parse_real(value_tok);
    } catch (const InvalidInput& e) {
      throw ParseError(e.what(), line_no);
    }
  }

  if (kind == "affine") {
    AffineSeparator a;
    a.b = coeffs[0];
    a.w.assign(coeffs.begin() + 1, coeffs.end());
    return a;
  }
  return PolynomialSeparator(d, k, std::move(coeffs));
}

std::string separator_to_string(const Separator& sep) {
  std::ostringstream out;
  write_separator(out, sep);
  return out.str();
}

Separator separator_from_string(const std::string& text) {
  std::istringstream in(text);
  return read_separator(in);
}

}  // namespace slt
