#include "aqe/expr/parser.hpp"

#include <cctype>

#include "aqe/error.hpp"

namespace aqe {

namespace {

class Parser {
 public:
  Parser(std::string_view text, std::span<const std::string> coords) : text_(text), coords_(coords) {}

  ScalarExpr parse() {
    ScalarExpr e = expr();
    skip_space();
    if (pos_ != text_.size()) throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
    return e;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
  }

  ScalarExpr expr() {
    ScalarExpr e = term();
    for (;;) {
      if (accept('+')) {
        e = e + term();
      } else if (accept('-')) {
        e = e - term();
      } else {
        return e;
      }
    }
  }

  ScalarExpr term() {
    ScalarExpr e = factor();
    for (;;) {
      if (accept('*')) {
        e = e * factor();
      } else if (accept('/')) {
        const std::size_t at = pos_;
        ScalarExpr d = factor();
        if (d.is_zero_literal()) throw ParseError("division by zero", at);
        e = e / d;
      } else {
        return e;
      }
    }
  }

  ScalarExpr factor() {
    if (accept('-')) return -factor();
    ScalarExpr b = base();
    if (accept('^')) {
      skip_space();
      const std::size_t at = pos_;
      bool negative = false;
      if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) {
        negative = text_[pos_] == '-';
        ++pos_;
      }
      const std::string digits = read_digits();
      if (digits.empty()) throw ParseError("expected an integer exponent", at);
      if (digits.size() > 6) throw ParseError("exponent too large", at);
      const int n = std::stoi(digits);
      if (b.is_zero_literal() && negative) throw ParseError("division by zero", at);
      b = b.pow(negative ? -n : n);
    }
    return b;
  }

  std::string read_digits() {
    std::string digits;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) digits += text_[pos_++];
    return digits;
  }

  ScalarExpr base() {
    skip_space();
    const std::size_t at = pos_;
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::string digits = read_digits();
      if (pos_ < text_.size() && text_[pos_] == '.') throw ParseError("decimal literals are not allowed", pos_);
      return ScalarExpr::constant(coords_.size(), Rational(Integer(digits, 10)));
    }
    if (c == '(') {
      ++pos_;
      ScalarExpr e = expr();
      expect(')');
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string name;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        name += text_[pos_++];
      }
      for (std::size_t i = 0; i < coords_.size(); ++i) {
        if (coords_[i] == name) return ScalarExpr::coordinate(coords_.size(), i);
      }
      if (name == "exp" || name == "log") {
        expect('(');
        ScalarExpr arg = expr();
        expect(')');
        return name == "exp" ? ScalarExpr::exp(arg) : ScalarExpr::log(arg);
      }
      throw UnknownIdentifier(name, at);
    }
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  std::string_view text_;
  std::span<const std::string> coords_;
  std::size_t pos_ = 0;
};

}  // namespace

ScalarExpr parse_scalar(std::string_view text, std::span<const std::string> coords) {
  return Parser(text, coords).parse();
}

}  // namespace aqe
