#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "polyring/gaussian_rational.hpp"

namespace loj::poly {

/// Multivariate Laurent polynomial in the raw form produced by the parser.
/// Exponents are signed; zero coefficients are removed.
struct ParsedExpr {
  std::map<std::vector<long>, GaussianRational> terms;
  /// Set when the text contained an O(monomial) term (series literals only):
  /// the exponent vector of that monomial.
  std::optional<std::vector<long>> big_o;
};

struct ParseOptions {
  bool allow_negative_exponents = false;
  bool allow_big_o = false;
};

/// Parses `text` over `vars`:
///   expr    := ['+'|'-'] term { ('+'|'-') term }
///   term    := power { ('*'|'/') power }        divisor must be a nonzero constant
///   power   := primary [ '^' ['-'] integer ]
///   primary := integer ['i'] | 'i' | name | '(' expr ')' | 'O' '(' expr ')'
/// Whitespace is ignored. "i" is the imaginary unit and cannot be a variable.
ParsedExpr parse_expression(std::string_view text, const std::vector<std::string>& vars,
                            const ParseOptions& options = {});

}  // namespace loj::poly
