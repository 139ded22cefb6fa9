#include "polyring/expr_parser.hpp"

#include <algorithm>
#include <cctype>

#include "errors.hpp"

namespace loj::poly {

namespace {

using Terms = std::map<std::vector<long>, GaussianRational>;

void accumulate(Terms& into, const std::vector<long>& e, const GaussianRational& c) {
  auto [it, inserted] = into.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) into.erase(it);
  } else if (c.is_zero()) {
    into.erase(it);
  }
}

Terms add(const Terms& a, const Terms& b, bool negate_b) {
  Terms out = a;
  for (const auto& [e, c] : b) accumulate(out, e, negate_b ? -c : c);
  return out;
}

Terms multiply(const Terms& a, const Terms& b) {
  Terms out;
  for (const auto& [ea, ca] : a) {
    for (const auto& [eb, cb] : b) {
      std::vector<long> e(ea.size());
      for (std::size_t k = 0; k < e.size(); ++k) e[k] = ea[k] + eb[k];
      accumulate(out, e, ca * cb);
    }
  }
  return out;
}

constexpr long kMaxExponent = 4096;

class Parser {
 public:
  Parser(std::string_view text, const std::vector<std::string>& vars, const ParseOptions& options)
      : text_(text), vars_(vars), options_(options) {
    for (const auto& v : vars_) {
      if (v == "i") throw ParseError("variable name 'i' clashes with the imaginary unit", 0);
      if (v == "O" && options_.allow_big_o) throw ParseError("variable name 'O' is reserved", 0);
    }
  }

  ParsedExpr run() {
    ParsedExpr out;
    out.terms = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    out.big_o = big_o_;
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Terms unit(const GaussianRational& c) const {
    Terms t;
    if (!c.is_zero()) t.emplace(std::vector<long>(vars_.size(), 0), c);
    return t;
  }

  Terms expr() {
    skip_ws();
    Terms acc;
    bool negate = false;
    if (accept('-')) {
      negate = true;
    } else {
      accept('+');
    }
    acc = term();
    if (negate) acc = add({}, acc, true);
    while (true) {
      if (accept('+')) {
        acc = add(acc, term(), false);
      } else if (accept('-')) {
        acc = add(acc, term(), true);
      } else {
        return acc;
      }
    }
  }

  Terms term() {
    const bool had_big_o = big_o_.has_value();
    const std::size_t start = pos_;
    Terms acc = power();
    int factors = 1;
    while (true) {
      if (accept('*')) {
        acc = multiply(acc, power());
        ++factors;
      } else if (accept('/')) {
        const std::size_t at = pos_;
        Terms d = power();
        ++factors;
        const std::vector<long> zero(vars_.size(), 0);
        if (d.empty()) throw ParseError("division by zero", at);
        if (d.size() != 1 || d.begin()->first != zero)
          throw ParseError("divisor must be a constant", at);
        const GaussianRational c = d.begin()->second;
        Terms out;
        for (const auto& [e, v] : acc) out.emplace(e, v / c);
        acc = std::move(out);
      } else {
        break;
      }
    }
    if (!had_big_o && big_o_ && factors > 1)
      throw ParseError("O() must be a whole top-level summand", start);
    return acc;
  }

  long integer_literal() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer");
    const long value = pos_ - start > 6 ? kMaxExponent + 1 : std::stol(std::string(text_.substr(start, pos_ - start)));
    if (value > kMaxExponent) throw ParseError("exponent too large", start);
    return value;
  }

  Terms power() {
    Terms base = primary();
    if (!accept('^')) return base;
    skip_ws();
    const std::size_t at = pos_;
    bool negative = false;
    if (accept('-')) negative = true;
    const long k = integer_literal();
    if (negative && k != 0) {
      if (!options_.allow_negative_exponents) throw ParseError("negative exponent", at);
      if (base.size() != 1) throw ParseError("negative power of a non-monomial", at);
      const auto& [e, c] = *base.begin();
      std::vector<long> inv(e.size());
      for (std::size_t j = 0; j < e.size(); ++j) inv[j] = -e[j];
      base = Terms{{inv, GaussianRational(1) / c}};
    }
    Terms out = unit(1);
    for (long j = 0; j < k; ++j) out = multiply(out, base);
    return out;
  }

  Terms primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      ++depth_;
      Terms inner = expr();
      if (!accept(')')) fail("expected ')'");
      --depth_;
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      mpq_class value(std::string(text_.substr(start, pos_ - start)), 10);
      // "2i" is 2 times the imaginary unit.
      if (pos_ < text_.size() && text_[pos_] == 'i' &&
          (pos_ + 1 == text_.size() || !is_name_char(text_[pos_ + 1]))) {
        ++pos_;
        return unit(GaussianRational(0, value));
      }
      return unit(GaussianRational(value));
    }
    if (is_name_start(c)) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && is_name_char(text_[pos_])) ++pos_;
      const std::string name(text_.substr(start, pos_ - start));
      if (name == "i") return unit(GaussianRational(0, 1));
      if (name == "O" && options_.allow_big_o) return big_o(start);
      const auto it = std::find(vars_.begin(), vars_.end(), name);
      if (it == vars_.end()) throw ParseError("unknown variable '" + name + "'", start);
      std::vector<long> e(vars_.size(), 0);
      e[static_cast<std::size_t>(it - vars_.begin())] = 1;
      return Terms{{e, GaussianRational(1)}};
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  Terms big_o(std::size_t start) {
    if (depth_ != 0) throw ParseError("O() must be a whole top-level summand", start);
    if (!accept('(')) fail("expected '(' after O");
    Terms inner = expr();
    if (!accept(')')) fail("expected ')'");
    if (inner.size() != 1) throw ParseError("O() takes a single monomial", start);
    if (big_o_) throw ParseError("more than one O() term", start);
    big_o_ = inner.begin()->first;
    return {};
  }

  static bool is_name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
  static bool is_name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

  std::string_view text_;
  const std::vector<std::string>& vars_;
  ParseOptions options_;
  std::size_t pos_ = 0;
  int depth_ = 0;
  std::optional<std::vector<long>> big_o_;
};

}  // namespace

ParsedExpr parse_expression(std::string_view text, const std::vector<std::string>& vars,
                            const ParseOptions& options) {
  return Parser(text, vars, options).run();
}

}  // namespace loj::poly
