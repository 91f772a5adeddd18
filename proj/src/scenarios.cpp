#include "paracr/scenarios.hpp"

#include <algorithm>
#include <numeric>

#include "paracr/rational_function.hpp"

namespace paracr {

PdeSystem flat_model() { return PdeSystem(pow(var("p"), 2) / Expr(4), Expr(0)); }

PdeSystem f_family(const Expr& f, const SampleConfig& cfg) {
  for (const auto& v : free_variables(f))
    if (v != "p") throw DegenerateProfile("f may only depend on p, found '" + v + "'");
  Expr f2 = diff(f, "p", 2);
  if (is_zero(f2, cfg).zero()) throw DegenerateProfile("f'' vanishes identically");
  Expr r = var("r");
  return PdeSystem(f, simplify(-(r * r) * diff(f, "p", 3) / f2));
}

namespace {

// k-th derivative of f evaluated at the expression at.
Expr f_at(const Expr& f, int k, const Expr& at) { return substitute(diff(f, "p", k), {{"p", at}}); }

KForm dX(const char* c) { return KForm::d(c, example_chart()); }

std::vector<Rational> divisors(const mpz_class& n) {
  std::vector<Rational> out;
  mpz_class m = abs(n);
  if (m > 1000000) return out;
  long v = m.get_si();
  for (long d = 1; d <= v; ++d)
    if (v % d == 0) out.emplace_back(d);
  return out;
}

// Rational roots of a polynomial in t, by the rational root test. Gives up
// (returns none) on coefficients too large to enumerate.
std::optional<Rational> rational_root(const Expr& poly, const std::string& t) {
  RationalFunction rf = RationalFunction::from_expr(poly);
  if (!rf.denominator().empty() || rf.is_zero()) return std::nullopt;
  AtomId id = intern_variable(t);
  std::map<int, Rational> coeffs;
  for (const auto& [m, c] : rf.numerator().terms()) {
    int e = 0;
    for (const auto& [a, k] : m) {
      if (a != id || k < 0) return std::nullopt;
      e = k;
    }
    coeffs[e] += c;
  }
  if (coeffs.size() == 1 && coeffs.begin()->first == 0) return std::nullopt;
  if (coeffs.begin()->first > 0) return Rational(0);
  mpz_class lcm = 1;
  for (const auto& [e, c] : coeffs) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den_mpz_t());
  mpz_class a0 = Rational(coeffs.begin()->second * lcm).get_num(), an = Rational(coeffs.rbegin()->second * lcm).get_num();
  auto eval = [&](const Rational& x) {
    Rational s = 0, xp = 1;
    int last = 0;
    for (const auto& [e, c] : coeffs) {
      for (; last < e; ++last) xp *= x;
      s += c * xp;
    }
    return s;
  };
  std::vector<Rational> found;
  for (const auto& num : divisors(a0))
    for (const auto& den : divisors(an))
      for (int sign : {1, -1}) {
        Rational x = sign * num / den;
        x.canonicalize();
        if (eval(x) == 0) found.push_back(x);
      }
  if (found.empty()) return std::nullopt;
  return *std::min_element(found.begin(), found.end(), [](const Rational& a, const Rational& b) {
    return abs(a) < abs(b) || (abs(a) == abs(b) && a < b);
  });
}

}  // namespace

const ChartPtr& example_chart() {
  static const ChartPtr chart = make_chart({"X", "Y", "P", "Q", "q"});
  return chart;
}

CoordinateMap example_coordinate_map(const Expr& f) {
  Expr X = var("X"), Y = var("Y"), P = var("P"), Q = var("Q"), q = var("q");
  Expr f0 = f_at(f, 0, X), f1 = f_at(f, 1, X), f2 = f_at(f, 2, X);
  CoordinateMap m{jet_chart(), example_chart(), {}};
  m.components["x"] = -P + q * f1 / f2;
  m.components["y"] = -q / f2;
  m.components["z"] = Y - P * X + q * (X * f1 - f0) / f2;
  m.components["p"] = X;
  m.components["r"] = Expr(1) / (q - Q);
  return m;
}

ExprMatrix example_rescaling(const Expr& f) {
  Expr X = var("X"), Q = var("Q"), q = var("q");
  Expr f1 = f_at(f, 1, X), f2 = f_at(f, 2, X), f3 = f_at(f, 3, X);
  Expr s = q - Q;
  ExprMatrix m(5, std::vector<Expr>(5, Expr(0)));
  m[0][0] = Expr(1);
  m[1][1] = s;
  m[2][1] = s * f3 / f2;
  m[2][2] = s * s;
  m[3][3] = Expr(-1);
  m[3][4] = -f1;
  m[4][4] = -f2;
  return m;
}

std::array<KForm, 5> example_intermediate_coframe(const Expr& f) {
  Expr X = var("X"), P = var("P"), Q = var("Q"), q = var("q");
  Expr f1 = f_at(f, 1, X), f2 = f_at(f, 2, X), f3 = f_at(f, 3, X);
  Expr s = q - Q;
  return {dX("Y") - P * dX("X"),
          (Expr(1) / s) * (dX("P") - Q * dX("X")),
          (Expr(1) / (s * s)) * (dX("Q") - (f3 / f2) * dX("P")),
          -dX("P") + exterior_derivative(KForm::scalar(q * f1 / f2, example_chart())),
          (Expr(-1) / f2) * (dX("q") - (q * f3 / f2) * dX("X"))};
}

std::array<KForm, 5> example_target_coframe(const Expr& f) {
  Expr X = var("X"), P = var("P"), Q = var("Q"), q = var("q");
  Expr ratio = f_at(f, 3, X) / f_at(f, 2, X);
  return {dX("Y") - P * dX("X"), dX("P") - Q * dX("X"), dX("Q") - (Q * ratio) * dX("X"), dX("P") - q * dX("X"),
          dX("q") - (q * ratio) * dX("X")};
}

bool in_rescaling_group(const ExprMatrix& m, const SampleConfig& cfg) {
  if (m.size() != 5) return false;
  for (const auto& row : m)
    if (row.size() != 5) return false;
  static const std::vector<std::pair<int, int>> zeros = {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 3}, {1, 4}, {2, 3},
                                                         {2, 4}, {3, 1}, {3, 2}, {4, 1}, {4, 2}};
  for (auto [i, j] : zeros)
    if (!is_structurally_zero(m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)])) return false;
  auto nonzero = [&](const Expr& e) { return !is_zero(e, cfg).zero(); };
  return nonzero(m[0][0]) && nonzero(m[1][1]) && nonzero(m[3][3]) &&
         nonzero(m[1][1] * m[2][2] - m[1][2] * m[2][1]) && nonzero(m[3][3] * m[4][4] - m[3][4] * m[4][3]);
}

GeodesicResidual geodesic_residual(const Expr& f, const Expr& c1, const Expr& c2, const Expr& c3,
                                   const std::optional<Expr>& gamma23, const SampleConfig& cfg) {
  Expr t = var("t");
  Expr Pg = c1 * f_at(f, 1, t) + c2;
  Expr Yg = c1 * f_at(f, 0, t) + c2 * t + c3;
  // frame components of the velocity: X' e3 + (Y' - P X') e1 + P' e2
  Expr a3 = Expr(1), a2 = diff(Pg, "t"), a1 = diff(Yg, "t") - Pg * a3;
  Expr g23 = gamma23 ? substitute(*gamma23, {{"X", t}}) : -f_at(f, 3, t) / (Expr(2) * f_at(f, 2, t));
  GeodesicResidual out;
  out.components = {simplify(diff(a1, "t")), simplify(diff(a2, "t") + Expr(2) * g23 * a2 * a3),
                    simplify(diff(a3, "t"))};
  out.verdict = combine({is_zero(out.components[0], cfg), is_zero(out.components[1], cfg),
                         is_zero(out.components[2], cfg)});
  if (opaque_functions(f).empty()) out.singular_t = rational_root(f_at(f, 2, t), "t");
  return out;
}

GeodesicResidual geodesic_residual(const Expr& f, const Rational& c1, const Rational& c2, const Rational& c3,
                                   const std::optional<Expr>& gamma23, const SampleConfig& cfg) {
  return geodesic_residual(f, Expr(c1), Expr(c2), Expr(c3), gamma23, cfg);
}

bool ExampleReport::passed() const {
  auto all = [](const std::array<ZeroVerdict, 5>& vs) {
    return std::all_of(vs.begin(), vs.end(), [](const ZeroVerdict& v) { return v.zero(); });
  };
  return admissibility.in_class() && N_zero.zero() && chern_zero.zero() && wunschmann_vs_monge.zero() &&
         all(coordinate_match) && all(pullback_match) && rescaling_in_group && general_solution.zero() &&
         tangent.zero() && contact_tangency.zero() && geodesic_residual.zero();
}

ExampleReport run_example_suite(const Expr& f, const SampleConfig& cfg) {
  PdeSystem sys = f_family(f, cfg);
  ExampleReport rep;
  rep.f = f;
  rep.admissibility = check_admissible(sys, cfg);
  rep.N_zero = is_zero(mixed_N(sys), cfg);
  rep.chern_zero = is_zero(chern(sys.H()), cfg);
  Expr W = wunschmann(sys);
  rep.wunschmann = is_zero(W, cfg);
  Expr r = var("r"), Gpp = diff(sys.G(), "p", 2);
  rep.wunschmann_vs_monge = is_zero(W - pow(r, 3) * monge(sys.G()) / pow(Gpp, 3), cfg);

  CoordinateMap map = example_coordinate_map(f);
  auto cf = standard_coframe(sys);
  auto shown = example_intermediate_coframe(f);
  auto target = example_target_coframe(f);
  ExprMatrix R = example_rescaling(f);
  rep.rescaling_in_group = in_rescaling_group(R, cfg);
  std::vector<KForm> pulled;
  for (std::size_t i = 0; i < 5; ++i) {
    pulled.push_back(pullback(cf->form(i), map));
    rep.coordinate_match[i] = form_verdict(pulled[i] - shown[i], cfg);
  }
  for (std::size_t i = 0; i < 5; ++i) {
    KForm rescaled(1, example_chart());
    for (std::size_t j = 0; j < 5; ++j)
      if (!is_structurally_zero(R[i][j])) rescaled = rescaled + R[i][j] * pulled[j];
    rep.pullback_match[i] = form_verdict(rescaled - target[i], cfg);
  }

  Expr X = var("X"), c1 = var("c1"), c2 = var("c2"), c3 = var("c3");
  Expr Ysol = c1 * f_at(f, 0, X) + c2 * X + c3;
  rep.general_solution =
      is_zero(diff(Ysol, "X", 3) - diff(Ysol, "X", 2) * f_at(f, 3, X) / f_at(f, 2, X), cfg);

  Expr t = var("t");
  Expr Pg = c1 * f_at(f, 1, t) + c2, Yg = c1 * f_at(f, 0, t) + c2 * t + c3;
  Expr a1 = diff(Yg, "t") - Pg, a2 = diff(Pg, "t");
  rep.tangent = combine({is_zero(a1, cfg), is_zero(a2 - c1 * f_at(f, 2, t), cfg)});
  // i_gamma'(dY - P dX) along gamma
  rep.contact_tangency = is_zero(diff(Yg, "t") - Pg * diff(t, "t"), cfg);
  auto geo = geodesic_residual(f, c1, c2, c3, std::nullopt, cfg);
  rep.geodesic_residual = geo.verdict;
  if (geo.singular_t)
    rep.warnings.push_back("f'' vanishes at t = " + geo.singular_t->get_str() +
                           "; the connection is singular there");
  return rep;
}

}  // namespace paracr
