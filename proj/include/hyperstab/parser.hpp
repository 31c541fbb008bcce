#ifndef HYPERSTAB_PARSER_HPP
#define HYPERSTAB_PARSER_HPP

#include "hyperstab/polynomial.hpp"

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hyperstab {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

namespace detail {

// Recursive descent over
//   expression ::= [sign] term (('+'|'-') term)*
//   term       ::= coeff ['*' factor ('*' factor)*] | factor ('*' factor)*
//   factor     ::= 'x' nonneg-int ['^' posint]
//   coeff      ::= int | '(' [sign] int '/' posint ')'
// A bare coefficient is a constant term (needed to print affine charts).
class PolynomialParser {
 public:
  PolynomialParser(std::string_view text, std::size_t num_vars) : text_(text), vars_(num_vars) {}

  Polynomial parse() {
    Polynomial result(vars_);
    skip_ws();
    bool negative = false;
    if (peek() == '+' || peek() == '-') {
      negative = (peek() == '-');
      ++pos_;
    }
    add(result, negative);
    while (true) {
      skip_ws();
      if (at_end()) break;
      char c = peek();
      if (c != '+' && c != '-') fail("expected '+' or '-'");
      ++pos_;
      add(result, c == '-');
    }
    if (result.is_zero()) throw ParseError("polynomial is identically zero", text_.size());
    return result;
  }

 private:
  void add(Polynomial& result, bool negative) {
    skip_ws();
    auto [mono, coeff] = term();
    result.add_term(mono, negative ? Rational(-coeff) : coeff);
  }

  std::pair<Monomial, Rational> term() {
    skip_ws();
    Rational coeff = 1;
    std::vector<int> exps(vars_, 0);
    if (peek() == 'x') {
      factor(exps);
    } else if (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '(') {
      coeff = coefficient();
      skip_ws();
      if (peek() != '*') return {Monomial(std::move(exps)), coeff};
      ++pos_;
      skip_ws();
      factor(exps);
    } else {
      fail(at_end() ? "unexpected end of input" : "expected a term");
    }
    while (true) {
      skip_ws();
      if (peek() != '*') break;
      ++pos_;
      skip_ws();
      factor(exps);
    }
    return {Monomial(std::move(exps)), coeff};
  }

  void factor(std::vector<int>& exps) {
    if (peek() != 'x') fail("expected a variable");
    std::size_t start = pos_;
    ++pos_;
    if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected a variable index");
    Integer idx = digits();
    if (idx >= Integer(static_cast<unsigned long>(vars_)))
      throw ParseError("variable index out of range", start);
    long power = 1;
    skip_ws();
    if (peek() == '^') {
      ++pos_;
      skip_ws();
      std::size_t at = pos_;
      if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected an exponent");
      Integer p = digits();
      if (p == 0) throw ParseError("exponent must be positive", at);
      if (p > 1000) throw ParseError("exponent too large", at);
      power = p.get_si();
    }
    exps[idx.get_ui()] += static_cast<int>(power);
  }

  Rational coefficient() {
    if (peek() == '(') {
      ++pos_;
      skip_ws();
      bool neg = false;
      if (peek() == '-' || peek() == '+') {
        neg = (peek() == '-');
        ++pos_;
        skip_ws();
      }
      if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected an integer numerator");
      Integer num = digits();
      skip_ws();
      if (peek() != '/') fail("expected '/'");
      ++pos_;
      skip_ws();
      std::size_t at = pos_;
      if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected a positive denominator");
      Integer den = digits();
      if (den == 0) throw ParseError("zero denominator", at);
      skip_ws();
      if (peek() != ')') fail("expected ')'");
      ++pos_;
      return make_rational(neg ? Integer(-num) : num, den);
    }
    return Rational(digits());
  }

  Integer digits() {
    std::size_t start = pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    return Integer(std::string(text_.substr(start, pos_ - start)));
  }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  std::string_view text_;
  std::size_t vars_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses a polynomial in x0..x{num_vars-1}. Throws ParseError carrying the
/// offending character position.
inline Polynomial parse_polynomial(std::string_view text, std::size_t num_vars) {
  if (num_vars == 0) throw ParseError("number of variables must be positive", 0);
  return detail::PolynomialParser(text, num_vars).parse();
}

}  // namespace hyperstab

#endif  // HYPERSTAB_PARSER_HPP
