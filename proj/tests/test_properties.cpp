// Randomized algebraic laws. Every suite draws laws::kInstances instances
// from a fixed seed, so failures reproduce exactly.

#include "doctest.h"
#include "laws.hpp"

using namespace paracr;
using laws::Gen;
using laws::kInstances;
using laws::kSeed;

TEST_CASE("d of d vanishes") {
  Gen g(kSeed);
  for (int i = 0; i < kInstances; ++i) CHECK_MESSAGE(laws::d_squared(g, i), "instance " << i);
}

TEST_CASE("wedge is graded commutative and associative") {
  Gen g(kSeed + 1);
  for (int i = 0; i < kInstances; ++i) CHECK_MESSAGE(laws::wedge_laws(g), "instance " << i);
}

TEST_CASE("pullback commutes with d") {
  Gen g(kSeed + 2);
  for (int i = 0; i < kInstances; ++i) CHECK_MESSAGE(laws::pullback_d(g, i), "instance " << i);
}

TEST_CASE("mixed partials commute") {
  Gen g(kSeed + 3);
  for (int i = 0; i < kInstances; ++i) CHECK_MESSAGE(laws::mixed_partials(g), "instance " << i);
}

TEST_CASE("D and Delta are derivations") {
  Gen g(kSeed + 4);
  for (int i = 0; i < kInstances; ++i) CHECK_MESSAGE(laws::derivations(g, i), "instance " << i);
}

TEST_CASE("laws catch broken identities") {
  // the same machinery flags a wrong sign rule and a non-derivation
  Gen g(kSeed + 5);
  KForm a = KForm::d("x", jet_chart()), b = KForm::d("p", jet_chart());
  CHECK_FALSE(form_verdict(wedge(a, b) - wedge(b, a)).zero());
  PdeSystem sys(parse("G", jet_parse_options()), parse("H", jet_parse_options()));
  Expr e = g.expr(laws::jet_names(), 2, true) + var("p");
  CHECK_FALSE(is_zero(total_D(e * e, sys) - total_D(e, sys) * e).zero());
}
