#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "doublealg/polynomial.hpp"

namespace doublealg {

/// Syntax error with a 1-based column into the parsed text.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t column)
      : Error(what + " (column " + std::to_string(column) + ")"), column_(column) {}
  std::size_t column() const { return column_; }

 private:
  std::size_t column_;
};

namespace detail {

struct Token {
  enum Kind { Number, Ident, Op, End } kind;
  std::string text;
  std::size_t column;
};

inline std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto ident_char = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t col = i + 1;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back({Token::Number, std::string(s.substr(i, j - i)), col});
      i = j;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      // `d/dx` names the coordinate vector field of x.
      if (c == 'd' && i + 2 < s.size() && s[i + 1] == '/' && s[i + 2] == 'd') {
        std::size_t j = i + 3;
        while (j < s.size() && ident_char(s[j])) ++j;
        if (j == i + 3) throw ParseError("expected coordinate after 'd/d'", col);
        out.push_back({Token::Ident, std::string(s.substr(i, j - i)), col});
        i = j;
        continue;
      }
      std::size_t j = i;
      while (j < s.size() && ident_char(s[j])) ++j;
      out.push_back({Token::Ident, std::string(s.substr(i, j - i)), col});
      i = j;
    } else if (c == '+' || c == '-' || c == '*' || c == '/' || c == '^' || c == '(' || c == ')') {
      out.push_back({Token::Op, std::string(1, c), col});
      ++i;
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", col);
    }
  }
  out.push_back({Token::End, "", s.size() + 1});
  return out;
}

class ExprParser {
 public:
  ExprParser(std::string_view text, ChartPtr chart, const std::vector<std::string>& basis)
      : tokens_(tokenize(text)), chart_(std::move(chart)), basis_(basis) {}

  Polynomial parse() {
    Polynomial p = expr();
    if (peek().kind != Token::End) throw ParseError("unexpected '" + peek().text + "'", peek().column);
    return p;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  bool accept_op(char c) {
    if (peek().kind == Token::Op && peek().text[0] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Polynomial expr() {
    Polynomial sum(chart_);
    bool first = true;
    while (true) {
      bool neg = false;
      if (accept_op('-')) neg = true;
      else if (!first && !accept_op('+')) break;
      else if (first) accept_op('+');
      Polynomial t = term();
      sum += neg ? -t : t;
      first = false;
      if (!(peek().kind == Token::Op && (peek().text == "+" || peek().text == "-"))) break;
    }
    return sum;
  }

  Polynomial term() {
    Polynomial p = factor();
    while (accept_op('*')) p = p * factor();
    return p;
  }

  Polynomial factor() {
    if (accept_op('-')) return -factor();
    Polynomial base = atom();
    if (accept_op('^')) {
      const Token& t = peek();
      if (t.kind != Token::Number) throw ParseError("expected integer exponent", t.column);
      ++pos_;
      base = base.pow(static_cast<unsigned>(std::stoul(t.text)));
    }
    return base;
  }

  Polynomial atom() {
    const Token t = peek();
    if (t.kind == Token::Number) {
      ++pos_;
      std::string lit = t.text;
      if (peek().kind == Token::Op && peek().text == "/" && tokens_[pos_ + 1].kind == Token::Number) {
        ++pos_;
        lit += "/" + peek().text;
        if (peek().text.find_first_not_of('0') == std::string::npos)
          throw ParseError("zero denominator", peek().column);
        ++pos_;
      }
      return Polynomial::constant(chart_, parse_rational(lit));
    }
    if (t.kind == Token::Ident) {
      ++pos_;
      // `a ^ b` between two names is a wedge product of basis elements.
      if (peek().kind == Token::Op && peek().text == "^" && tokens_[pos_ + 1].kind == Token::Ident) {
        std::string rhs = tokens_[pos_ + 1].text;
        pos_ += 2;
        return wedge(t.text, rhs, t.column);
      }
      if (auto i = chart_->find(t.text)) return Polynomial::variable(chart_, *i);
      throw ParseError("unknown symbol '" + t.text + "'", t.column);
    }
    if (accept_op('(')) {
      Polynomial p = expr();
      if (!accept_op(')')) throw ParseError("expected ')'", peek().column);
      return p;
    }
    throw ParseError(t.kind == Token::End ? "unexpected end of expression" : "unexpected '" + t.text + "'",
                     t.column);
  }

  Polynomial wedge(const std::string& a, const std::string& b, std::size_t column) {
    if (auto i = chart_->find(a + "^" + b)) return Polynomial::variable(chart_, *i);
    if (auto i = chart_->find(b + "^" + a)) return -Polynomial::variable(chart_, *i);
    if (a == b) {
      for (const auto& name : basis_) {
        auto cut = name.find('^');
        if (cut != std::string::npos && (name.substr(0, cut) == a || name.substr(cut + 1) == a))
          return Polynomial(chart_);
      }
    }
    throw ParseError("unknown wedge '" + a + " ^ " + b + "'", column);
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  ChartPtr chart_;
  const std::vector<std::string>& basis_;
};

}  // namespace detail

inline Polynomial parse_polynomial(std::string_view text, const ChartPtr& chart) {
  static const std::vector<std::string> none;
  return detail::ExprParser(text, chart, none).parse();
}

/// Parses an expression linear in the symbols of `basis` with polynomial
/// coefficients on `chart`, e.g. `x * d/dx - y * d/dy` or `x * e1 + e2`.
/// Wedge basis symbols are spelled `a^b` in `basis` and may be written in
/// either order in the text.
inline PolyVector parse_linear(std::string_view text, const ChartPtr& chart, const std::vector<std::string>& basis) {
  for (const auto& b : basis)
    if (chart->find(b)) throw Error("basis symbol '" + b + "' clashes with a coordinate");
  ChartPtr ext = extend_chart(chart, basis);
  Polynomial p = detail::ExprParser(text, ext, basis).parse();
  std::vector<std::size_t> vars;
  for (std::size_t k = 0; k < basis.size(); ++k) vars.push_back(chart->size() + k);
  PolyVector out = zero_vector(chart, basis.size());
  for (auto& [key, coeff] : p.split(vars)) {
    if (total_degree(key) != 1) {
      throw ParseError(total_degree(key) == 0 ? "term without a basis symbol in '" + std::string(text) + "'"
                                              : "expression is not linear in basis symbols: '" + std::string(text) + "'",
                       1);
    }
    for (std::size_t k = 0; k < key.size(); ++k)
      if (key[k] == 1) out[k] = coeff.embed(chart);
  }
  return out;
}

/// Prints Σ coeff_k * basis_k, grouping each coefficient in parentheses
/// when it has more than one term. Prints `0` for the zero vector.
inline std::string format_linear(const PolyVector& coeffs, const std::vector<std::string>& basis) {
  std::string out;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    const Polynomial& c = coeffs[k];
    if (c.is_zero()) continue;
    std::string piece;
    bool negative = false;
    if (c.size() == 1) {
      const auto& [e, v] = *c.terms().begin();
      negative = sgn(v) < 0;
      Polynomial mag = negative ? -c : c;
      if (mag.is_constant() && mag.constant_value() == 1) piece = basis[k];
      else piece = mag.to_string() + " * " + basis[k];
    } else {
      piece = "(" + c.to_string() + ") * " + basis[k];
    }
    if (out.empty()) out = negative ? "-" + piece : piece;
    else out += (negative ? " - " : " + ") + piece;
  }
  return out.empty() ? "0" : out;
}

}  // namespace doublealg
