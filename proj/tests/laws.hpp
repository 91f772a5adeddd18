#pragma once

// Random instances of the algebraic laws, shared by the property tests and
// the acceptance runner. Each law draws one instance from the generator and
// reports whether it holds.

#include <algorithm>
#include <random>

#include "paracr/forms.hpp"
#include "paracr/parse.hpp"

namespace laws {

using namespace paracr;

constexpr std::uint64_t kSeed = 0x70726f70;
constexpr int kInstances = 100;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  Rational nonzero_rational(int bound = 5, int den = 3) {
    int num = uniform(-bound, bound - 1);
    return Rational(num >= 0 ? num + 1 : num, uniform(1, den));
  }
  Expr small_rational() { return Expr(nonzero_rational()); }

  Expr leaf(const std::vector<std::string>& vars, bool opaque) {
    int pick = uniform(0, opaque ? 6 : 3);
    if (pick <= 1) return small_rational();
    if (pick <= 3 || !opaque) return var(vars[static_cast<std::size_t>(uniform(0, static_cast<int>(vars.size()) - 1))]);
    static const char* fns[] = {"G", "H", "G_p", "f(p)"};
    return parse(fns[uniform(0, 3)], jet_parse_options());
  }

  // Sums, products, small powers and quotients by v^2 + k, k >= 1, which stay
  // nonzero under any substitution.
  Expr expr(const std::vector<std::string>& vars, int depth, bool opaque = false) {
    if (depth == 0) return leaf(vars, opaque);
    switch (uniform(0, 4)) {
      case 0:
      case 1:
        return expr(vars, depth - 1, opaque) + expr(vars, depth - 1, opaque);
      case 2:
        return expr(vars, depth - 1, opaque) * expr(vars, depth - 1, opaque);
      case 3:
        return pow(expr(vars, depth - 1, opaque), uniform(2, 3));
      default: {
        Expr v = var(vars[static_cast<std::size_t>(uniform(0, static_cast<int>(vars.size()) - 1))]);
        return expr(vars, depth - 1, opaque) / (v * v + Expr(uniform(1, 4)));
      }
    }
  }

  // Polynomial in p of degree <= deg with small integer coefficients.
  Expr poly_p(int deg) {
    Expr out(0);
    for (int k = 0; k <= deg; ++k) out = out + Expr(uniform(-4, 4)) * pow(var("p"), k);
    return out;
  }

  KForm form(const ChartPtr& chart, int degree, int terms, bool opaque = false) {
    KForm a(degree, chart);
    const int n = static_cast<int>(chart->dim());
    for (int t = 0; t < terms; ++t) {
      FormIndex idx;
      while (static_cast<int>(idx.size()) < degree) {
        int i = uniform(0, n - 1);
        if (std::find(idx.begin(), idx.end(), i) == idx.end()) idx.push_back(i);
      }
      a.add(idx, expr(chart->names(), 1, opaque));
    }
    return a;
  }

 private:
  std::mt19937_64 rng_;
};

inline const std::vector<std::string>& jet_names() {
  static const std::vector<std::string> names = {"x", "y", "z", "p", "r"};
  return names;
}

inline bool d_squared(Gen& g, int i) {
  KForm a = g.form(jet_chart(), i % 4, 2, true);
  return exterior_derivative(exterior_derivative(a)).is_zero();
}

inline bool wedge_laws(Gen& g) {
  int k = g.uniform(0, 2), l = g.uniform(0, 2), m = g.uniform(0, 1);
  KForm a = g.form(jet_chart(), k, 2), b = g.form(jet_chart(), l, 2), c = g.form(jet_chart(), m, 1);
  KForm ab = wedge(a, b), ba = wedge(b, a);
  bool graded = form_verdict((k * l) % 2 ? ab + ba : ab - ba).zero();
  bool assoc = form_verdict(wedge(ab, c) - wedge(a, wedge(b, c))).zero();
  return graded && assoc;
}

inline bool pullback_d(Gen& g, int i) {
  static const ChartPtr target = make_chart({"s", "t", "u"});
  CoordinateMap map{jet_chart(), target, {}};
  for (const auto& n : jet_names()) map.components[n] = g.expr(target->names(), 1);
  KForm a = g.form(jet_chart(), i % 3, 2);
  return form_verdict(pullback(exterior_derivative(a), map) - exterior_derivative(pullback(a, map))).zero();
}

inline bool mixed_partials(Gen& g) {
  Expr e = g.expr(jet_names(), 3, true);
  const std::string& a = jet_names()[static_cast<std::size_t>(g.uniform(0, 4))];
  const std::string& b = jet_names()[static_cast<std::size_t>(g.uniform(0, 4))];
  return is_zero(diff(diff(e, a), b) - diff(diff(e, b), a)).zero();
}

inline bool derivations(Gen& g, int i) {
  static const PdeSystem opaque(parse("G", jet_parse_options()), parse("H", jet_parse_options()));
  PdeSystem sys = i % 2 ? opaque : PdeSystem(g.expr({"x", "y", "z", "p"}, 1), g.expr(jet_names(), 1));
  Expr a = g.expr(jet_names(), 2, true), b = g.expr(jet_names(), 2, true);
  Expr c = g.small_rational();
  return is_zero(total_D(a * b, sys) - total_D(a, sys) * b - a * total_D(b, sys)).zero() &&
         is_zero(total_Delta(a * b, sys) - total_Delta(a, sys) * b - a * total_Delta(b, sys)).zero() &&
         is_zero(total_D(c * a + b, sys) - c * total_D(a, sys) - total_D(b, sys)).zero() &&
         total_D(c, sys).is_zero_constant();
}

}  // namespace laws
