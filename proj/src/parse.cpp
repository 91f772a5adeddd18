#include "paracr/parse.hpp"

#include <cctype>

namespace paracr {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Parser {
 public:
  Parser(std::string_view text, const ParseOptions& opts) : s_(text), opts_(opts) {}

  Expr run() {
    Expr e = expr();
    skip_ws();
    if (pos_ != s_.size()) fail(std::string("unexpected '") + s_[pos_] + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= s_.size()) fail(std::string("expected '") + c + "' but reached end of input");
      fail(std::string("expected '") + c + "'");
    }
  }

  Expr expr() {
    std::vector<Expr> terms{term()};
    for (;;) {
      if (accept('+'))
        terms.push_back(term());
      else if (accept('-'))
        terms.push_back(-term());
      else
        break;
    }
    return make_sum(std::move(terms));
  }

  // A leading unary minus contributes a separate -1 factor, so "-p/q"
  // reads as -1 * (p/q) and "(-p)/q" stays a quotient of a product.
  void push_signed(std::vector<Expr>& factors) {
    bool negative = false;
    while (accept('-')) negative = !negative;
    if (negative) factors.push_back(Expr(-1));
    factors.push_back(power());
  }

  Expr unary() {
    if (accept('-')) return -unary();
    return power();
  }

  Expr term() {
    std::vector<Expr> factors;
    push_signed(factors);
    for (;;) {
      if (accept('*')) {
        push_signed(factors);
      } else if (accept('/')) {
        std::size_t at = pos_;
        Expr den = unary();
        if (den.is_zero_constant()) throw ParseError("division by literal zero", at);
        factors.back() = make_quotient(factors.back(), den);
      } else {
        break;
      }
    }
    return make_product(std::move(factors));
  }

  long integer() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer");
    if (pos_ - start > 9) throw ParseError("integer too large", start);
    return std::stol(std::string(s_.substr(start, pos_ - start)));
  }

  Expr power() {
    Expr base = primary();
    if (!accept('^')) return base;
    long n;
    if (accept('(')) {
      bool neg = accept('-');
      n = integer();
      if (neg) n = -n;
      expect(')');
    } else {
      bool neg = accept('-');
      n = integer();
      if (neg) n = -n;
    }
    return make_power(base, static_cast<int>(n));
  }

  std::vector<Expr> arguments() {
    expect('(');
    std::vector<Expr> args{expr()};
    while (accept(',')) args.push_back(expr());
    expect(')');
    return args;
  }

  Expr primary() {
    char c = peek();
    if (c == '\0') fail("unexpected end of input");
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return Expr::constant(Rational(std::string(s_.substr(start, pos_ - start))));
    }
    if (!ident_start(c)) fail(std::string("unknown token '") + c + "'");

    std::size_t start = pos_;
    while (pos_ < s_.size() && ident_char(s_[pos_])) ++pos_;
    std::string name(s_.substr(start, pos_ - start));

    if (name == "D" && pos_ < s_.size() && s_[pos_] == '[') return derivative_form();

    int primes = 0;
    while (pos_ < s_.size() && s_[pos_] == '\'') {
      ++primes;
      ++pos_;
    }
    if (peek() == '(') {
      std::size_t at = pos_;
      auto args = arguments();
      if (primes > 0 && args.size() != 1)
        throw ParseError("apostrophe derivatives need exactly one argument", at);
      std::vector<int> orders(args.size(), 0);
      if (primes > 0) orders[0] = primes;
      return Expr::function(name, std::move(args), std::move(orders));
    }
    if (primes > 0) fail("expected '(' after derivative apostrophes");
    return declared_or_variable(name, start);
  }

  Expr derivative_form() {
    ++pos_;  // '['
    skip_ws();
    std::size_t start = pos_;
    if (pos_ >= s_.size() || !ident_start(s_[pos_])) fail("expected function name");
    while (pos_ < s_.size() && ident_char(s_[pos_])) ++pos_;
    std::string name(s_.substr(start, pos_ - start));
    std::vector<int> orders;
    while (accept(',')) orders.push_back(static_cast<int>(integer()));
    expect(']');
    std::size_t at = pos_;
    auto args = arguments();
    if (orders.size() != args.size()) throw ParseError("derivative orders do not match argument count", at);
    return Expr::function(name, std::move(args), std::move(orders));
  }

  Expr declared_or_variable(const std::string& name, std::size_t start) {
    if (auto it = opts_.opaque.find(name); it != opts_.opaque.end())
      return declared(name, it->second, std::string(), start);
    auto us = name.find('_');
    if (us != std::string::npos && us > 0) {
      std::string head = name.substr(0, us);
      if (auto it = opts_.opaque.find(head); it != opts_.opaque.end())
        return declared(head, it->second, name.substr(us + 1), start);
    }
    return Expr::variable(name);
  }

  Expr declared(const std::string& name, const std::vector<std::string>& coords, const std::string& suffix,
                std::size_t start) {
    std::vector<Expr> args;
    for (const auto& c : coords) args.push_back(Expr::variable(c));
    std::vector<int> orders(coords.size(), 0);
    for (char ch : suffix) {
      bool found = false;
      for (std::size_t i = 0; i < coords.size(); ++i) {
        if (coords[i].size() == 1 && coords[i][0] == ch) {
          ++orders[i];
          found = true;
        }
      }
      if (!found) throw ParseError("'" + name + "' has no argument '" + std::string(1, ch) + "'", start);
    }
    return Expr::function(name, std::move(args), std::move(orders));
  }

  std::string_view s_;
  const ParseOptions& opts_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view text, const ParseOptions& options) { return Parser(text, options).run(); }

const ParseOptions& jet_parse_options() {
  static const ParseOptions opts{{
      {"G", {"x", "y", "z", "p"}},
      {"H", {"x", "y", "z", "p", "r"}},
  }};
  return opts;
}

}  // namespace paracr
