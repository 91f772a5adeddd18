#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace paracr {

using Rational = mpq_class;

enum class ExprKind { Constant, Variable, Function, Sum, Product, Power, Quotient };

namespace detail {
struct Node;
}

// Immutable expression tree. Copies share structure; every node is built
// through the smart constructors below, which flatten nested sums/products,
// fold rational constants and drop neutral elements. Anything beyond that
// (collecting like terms, cancelling) is the job of simplify().
//
// Opaque functions carry one argument list and a derivative multi-index with
// one order per argument, so f'''(p) is a single node and G_pp is
// G(x,y,z,p) with orders (0,0,0,2).
class Expr {
 public:
  Expr();  // the constant 0
  Expr(int value);
  Expr(const Rational& value);

  static Expr constant(const Rational& value);
  static Expr variable(std::string name);
  static Expr function(std::string name, std::vector<Expr> args, std::vector<int> orders);
  static Expr function(std::string name, const Expr& arg, int order = 0);

  ExprKind kind() const;
  bool is_constant() const { return kind() == ExprKind::Constant; }
  bool is_constant(long v) const;
  bool is_zero_constant() const { return is_constant(0); }

  const Rational& value() const;
  const std::string& name() const;
  // Sum/product terms, function arguments, {base} for powers,
  // {numerator, denominator} for quotients.
  const std::vector<Expr>& operands() const;
  const std::vector<int>& orders() const;
  int exponent() const;
  const Expr& base() const;
  const Expr& numerator() const;
  const Expr& denominator() const;

  std::size_t hash() const;
  const detail::Node* node_id() const { return node_.get(); }

  // Structural equality.
  bool operator==(const Expr& other) const;
  bool operator!=(const Expr& other) const { return !(*this == other); }

 private:
  explicit Expr(std::shared_ptr<const detail::Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const detail::Node> node_;

  friend Expr make_sum(std::vector<Expr> terms);
  friend Expr make_product(std::vector<Expr> factors);
  friend Expr make_power(const Expr& base, int exponent);
  friend Expr make_quotient(const Expr& num, const Expr& den);
};

namespace detail {
struct Node {
  ExprKind kind = ExprKind::Constant;
  Rational value;
  std::string name;
  std::vector<Expr> children;
  std::vector<int> orders;
  int exponent = 0;
  std::size_t hash = 0;
};
}  // namespace detail

Expr make_sum(std::vector<Expr> terms);
Expr make_product(std::vector<Expr> factors);
Expr make_power(const Expr& base, int exponent);
// Throws std::domain_error when den is the literal constant 0.
Expr make_quotient(const Expr& num, const Expr& den);

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr pow(const Expr& base, int exponent);

Expr var(std::string name);

// Partial derivative with respect to the coordinate `v`.
Expr diff(const Expr& e, const std::string& v);
Expr diff(const Expr& e, const std::string& v, int times);

// Simultaneous substitution of coordinates; unbound coordinates stay.
Expr substitute(const Expr& e, const std::map<std::string, Expr>& bindings);

std::set<std::string> free_variables(const Expr& e);
// Opaque function name -> arity. Throws if one name is used with two arities.
std::map<std::string, std::size_t> opaque_functions(const Expr& e);

std::size_t node_count(const Expr& e);

std::string to_string(const Expr& e);
std::ostream& operator<<(std::ostream& os, const Expr& e);

}  // namespace paracr
