#include "paracr/invariants.hpp"

#include "paracr/rational_function.hpp"

namespace paracr {

Expr wunschmann(const PdeSystem& sys) {
  const Expr& H = sys.H();
  Expr Hr = diff(H, "r"), Hp = diff(H, "p"), Hz = diff(H, "z");
  Expr DHr = total_D(Hr, sys);
  Expr D2Hr = total_D(DHr, sys);
  Expr DHp = total_D(Hp, sys);
  return simplify(make_sum({Expr(9) * D2Hr, Expr(-27) * DHp, Expr(-18) * Hr * DHr, Expr(18) * Hp * Hr,
                            Expr(4) * pow(Hr, 3), Expr(54) * Hz}));
}

Expr monge(const Expr& G) {
  Expr g2 = diff(G, "p", 2);
  Expr g3 = diff(g2, "p");
  Expr g4 = diff(g3, "p");
  Expr g5 = diff(g4, "p");
  return simplify(
      make_sum({Expr(40) * pow(g3, 3), Expr(-45) * g2 * g3 * g4, Expr(9) * pow(g2, 2) * g5}));
}

Expr mixed_N(const PdeSystem& sys) {
  return simplify(Expr(2) * diff(sys.G(), "p", 3) + diff(sys.G(), "p", 2) * diff(sys.H(), "r", 2));
}

Expr chern(const Expr& H) { return simplify(diff(H, "r", 4)); }

InvariantReport classify(const PdeSystem& sys, const SampleConfig& cfg) {
  InvariantReport rep;
  rep.admissibility = check_admissible(sys, cfg);
  rep.W = wunschmann(sys);
  rep.M = monge(sys.G());
  rep.N = mixed_N(sys);
  rep.Z = chern(sys.H());
  rep.W_verdict = is_zero(rep.W, cfg);
  rep.M_verdict = is_zero(rep.M, cfg);
  rep.N_verdict = is_zero(rep.N, cfg);
  rep.Z_verdict = is_zero(rep.Z, cfg);
  if (!rep.admissibility.two_nondegenerate.zero()) {
    Expr gpp = simplify(diff(sys.G(), "p", 2));
    rep.B = simplify(rep.M / (Expr(2) * pow(gpp, 3)));
    rep.C = simplify(rep.N / gpp);
  }
  if (rep.admissibility.in_class()) {
    InvariantFlags f;
    f.contact_projective_pair = rep.N_verdict.zero();
    f.flat = rep.W_verdict.zero() && rep.M_verdict.zero() && rep.N_verdict.zero();
    rep.flags = f;
  }
  return rep;
}

InvariantReport classify_admissible(const PdeSystem& sys, const SampleConfig& cfg) {
  InvariantReport rep = classify(sys, cfg);
  if (!rep.flags) throw InadmissibleSystem(rep.admissibility);
  return rep;
}

}  // namespace paracr
