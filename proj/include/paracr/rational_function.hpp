#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "paracr/expr.hpp"

namespace paracr {

// Atoms are coordinates and opaque function applications, interned
// process-wide. Ids are stable for the lifetime of the process.
using AtomId = std::uint32_t;

AtomId intern_variable(const std::string& name);
AtomId intern_function(const Expr& application);
Expr atom_expr(AtomId id);
const std::string& atom_key(AtomId id);

// Sorted (atom, exponent) pairs with nonzero exponents. Negative exponents
// appear only in Laurent numerators.
using Monomial = std::vector<std::pair<AtomId, int>>;

struct GrlexLess {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

class Polynomial {
 public:
  using Terms = std::map<Monomial, Rational, GrlexLess>;

  Polynomial() = default;
  explicit Polynomial(const Rational& c);
  static Polynomial atom(AtomId id, int exponent = 1);
  static Polynomial monomial(const Monomial& m, const Rational& c);

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  const Terms& terms() const { return terms_; }
  const Monomial& leading_monomial() const { return terms_.rbegin()->first; }
  const Rational& leading_coefficient() const { return terms_.rbegin()->second; }

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator-() const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial scaled(const Rational& c, const Monomial& m) const;
  Polynomial pow(unsigned n) const;
  void add_term(const Monomial& m, const Rational& c);

  // Exponentwise minimum over all terms (may be negative).
  Monomial min_monomial() const;
  bool has_negative_exponent() const;
  std::vector<AtomId> atoms() const;

  bool operator==(const Polynomial& o) const { return terms_ == o.terms_; }
  bool operator!=(const Polynomial& o) const { return !(*this == o); }

 private:
  Terms terms_;
};

Monomial monomial_mul(const Monomial& a, const Monomial& b);
Monomial monomial_inverse(const Monomial& a);
int monomial_degree(const Monomial& m);

// Exact quotient of polynomials with non-negative exponents; false if the
// divisor does not divide.
bool exact_divide(const Polynomial& num, const Polynomial& den, Polynomial& quotient);

// num / prod(factor^exp). Denominator factors are non-monomial polynomials
// without monomial content and with leading coefficient 1; monomial
// denominators live in num as negative exponents. The numerator vanishes
// iff the function is zero.
class RationalFunction {
 public:
  RationalFunction() = default;
  RationalFunction(const Rational& c) : num_(c) {}
  explicit RationalFunction(Polynomial num) : num_(std::move(num)) {}
  static RationalFunction from_expr(const Expr& e);

  bool is_zero() const { return num_.is_zero(); }
  bool is_constant() const { return den_.empty() && num_.is_constant(); }
  const Polynomial& numerator() const { return num_; }
  const std::vector<std::pair<Polynomial, int>>& denominator() const { return den_; }

  RationalFunction operator+(const RationalFunction& o) const;
  RationalFunction operator-(const RationalFunction& o) const;
  RationalFunction operator-() const;
  RationalFunction operator*(const RationalFunction& o) const;
  // Throws std::domain_error when o is zero.
  RationalFunction operator/(const RationalFunction& o) const;
  RationalFunction inverse() const;
  RationalFunction pow(int n) const;

  Expr to_expr() const;

 private:
  void add_factor(Polynomial f, int exponent);
  void reduce();

  Polynomial num_;
  std::vector<std::pair<Polynomial, int>> den_;
};

// Canonical rational-function form of e, with opaque applications as atoms.
Expr simplify(const Expr& e);
bool is_structurally_zero(const Expr& e);

}  // namespace paracr
