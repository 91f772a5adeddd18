#include "doctest.h"

#include "paracr/forms.hpp"
#include "paracr/parse.hpp"
#include "paracr/rational_function.hpp"

using namespace paracr;

namespace {

Expr P(const std::string& s) { return parse(s, jet_parse_options()); }
bool same(const Expr& a, const Expr& b) { return is_structurally_zero(a - b); }
PdeSystem flat() { return PdeSystem(P("p^2/4"), Expr(0)); }
const ChartPtr& J() { return jet_chart(); }
KForm d(const char* c) { return KForm::d(c, J()); }

}  // namespace

TEST_CASE("wedge") {
  CHECK(wedge(d("x"), d("x")).is_zero());
  CHECK((wedge(d("x"), d("y")) + wedge(d("y"), d("x"))).is_zero());
  auto cf = standard_coframe(flat());
  KForm w24 = wedge(cf->form(1), cf->form(3));
  // (dp - r dx - (p r/2) dy) ^ dx = dp^dx - (p r/2) dy^dx
  CHECK(same(w24.coefficient({0, 3}), Expr(-1)));
  CHECK(same(w24.coefficient({0, 1}), P("p*r/2")));
  CHECK(w24.terms().size() == 2);
  CHECK_THROWS_AS(wedge(d("x"), cf->basis_form(0)), BasisMismatch);
}

TEST_CASE("exterior derivative") {
  CHECK(exterior_derivative(d("x")).is_zero());
  KForm zdx = var("z") * d("x");
  KForm expected = wedge(d("z"), d("x"));
  CHECK((exterior_derivative(zdx) - expected).is_zero());

  auto cf = standard_coframe(flat());
  KForm dw1 = change_basis(exterior_derivative(cf->form(0)), cf);
  KForm want(2, J(), cf);
  want.add({1, 3}, Expr(-1));
  want.add({1, 4}, P("-p/2"));
  CHECK((dw1 - want).is_zero());
}

TEST_CASE("interior product and Lie derivative") {
  VectorField dx = coordinate_field("x", J()), dz = coordinate_field("z", J());
  CHECK(same(interior_product(dx, d("x")).coefficient({}), Expr(1)));
  CHECK((interior_product(dx, wedge(d("y"), d("x"))) + d("y")).is_zero());
  auto cf = standard_coframe(flat());
  CHECK(same(interior_product(dz, cf->form(0)).coefficient({}), Expr(1)));

  CHECK(lie_derivative(dx, d("x")).is_zero());
  CHECK(lie_derivative(dz, cf->form(0)).is_zero());
  CHECK(lie_derivative(dx, cf->form(0)).is_zero());
  auto gen = standard_coframe(PdeSystem(P("G"), P("H")));
  KForm l = lie_derivative(dz, gen->form(0));
  CHECK((l + P("G_z") * d("y")).is_zero());
}

TEST_CASE("symmetry residuals on the flat model") {
  for (const char* c : {"x", "z"}) {
    auto res = symmetry_residuals(coordinate_field(c, J()), flat());
    for (const auto& r : res) CHECK(r.is_zero());
  }
  VectorField zdz{J(), {Expr(0), Expr(0), var("z"), Expr(0), Expr(0)}};
  auto res = symmetry_residuals(zdz, flat());
  bool any_nonzero = false;
  for (const auto& r : res) any_nonzero = any_nonzero || !form_verdict(r).zero();
  CHECK(any_nonzero);
}

TEST_CASE("standard coframe and change of basis") {
  auto cf = standard_coframe(flat());
  KForm w3 = d("r") - P("r^2/2") * d("y");
  CHECK((cf->form(2) - w3).is_zero());
  CHECK((cf->form(3) - d("x")).is_zero());
  auto fam = standard_coframe(PdeSystem(P("f(p)"), P("-r^2*f'''(p)/f''(p)")));
  CHECK((fam->form(0) - (d("z") - var("p") * d("x") - P("f(p)") * d("y"))).is_zero());

  KForm ex = change_basis(d("x"), cf);
  CHECK((ex - cf->basis_form(3)).is_zero());
  KForm ep = change_basis(d("p"), cf);
  KForm want = cf->basis_form(1) + var("r") * cf->basis_form(3) + P("p*r/2") * cf->basis_form(4);
  CHECK((ep - want).is_zero());

  KForm two = P("x*z") * wedge(d("p"), d("r")) + P("1/(p + 1)") * wedge(d("y"), d("z"));
  KForm back = change_basis(change_basis(two, cf), nullptr);
  CHECK((back - two).is_zero());
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) {
      Expr s;
      for (std::size_t k = 0; k < 5; ++k) s = s + cf->matrix()[i][k] * cf->inverse_matrix()[k][j];
      CHECK(same(s, Expr(i == j ? 1 : 0)));
    }
}

TEST_CASE("Levi form") {
  auto lf = levi_form(flat());
  CHECK(same(lf.L[0][0], Expr(-1)));
  CHECK(same(lf.L[0][1], P("-p/2")));
  CHECK(lf.L[1][0].is_zero_constant());
  CHECK(lf.L[1][1].is_zero_constant());
  CHECK(lf.det().is_zero_constant());

  auto rp = levi_form(PdeSystem(P("r*p"), Expr(0)));
  CHECK_FALSE(is_zero(rp.det()).zero());

  auto fam = levi_form(PdeSystem(P("f(p)"), P("-r^2*f'''(p)/f''(p)")));
  CHECK(is_zero(fam.det()).zero());
  auto gen = levi_form(PdeSystem(P("G"), P("H")));
  CHECK(is_zero(gen.det()).zero());
}

TEST_CASE("Frobenius residuals") {
  auto cf = standard_coframe(flat());
  for (const auto& r : frobenius_residual({cf->form(0), d("x"), d("y")})) CHECK(r.is_zero());
  for (const auto& r : frobenius_residual({cf->form(0), cf->form(1), cf->form(2)})) CHECK(r.is_zero());

  auto bad = standard_coframe(PdeSystem(P("p^2"), P("p")));
  bool nonzero = false;
  for (const auto& r : frobenius_residual({bad->form(0), bad->form(1), bad->form(2)}))
    nonzero = nonzero || !form_verdict(r).zero();
  CHECK(nonzero);
  CHECK_THROWS_AS(frobenius_residual({d("x"), Expr(2) * d("x")}), DependentGenerators);
}

TEST_CASE("pullback") {
  auto chart = J();
  CoordinateMap id{chart, chart, {}};
  for (const auto& n : chart->names()) id.components[n] = var(n);
  KForm a = P("x*r") * wedge(d("z"), d("p")) + P("y") * wedge(d("x"), d("r"));
  CHECK((pullback(a, id) - a).is_zero());

  auto polar = make_chart({"s", "t"});
  auto plane = make_chart({"u", "v"});
  CoordinateMap m{plane, polar, {{"u", P("s*t")}, {"v", P("s + t^2")}}};
  KForm du = KForm::d("u", plane);
  KForm img = pullback(du, m);
  CHECK(same(img.coefficient({0}), var("t")));
  CHECK(same(img.coefficient({1}), var("s")));
}
