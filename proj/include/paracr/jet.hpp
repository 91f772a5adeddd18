#pragma once

#include <memory>

#include "paracr/identity.hpp"

namespace paracr {

// z_y = G(x,y,z,p), z_xxx = H(x,y,z,p,r) with p = z_x, r = z_xx.
class PdeSystem {
 public:
  PdeSystem(Expr G, Expr H);

  const Expr& G() const { return G_; }
  const Expr& H() const { return H_; }

  // D G, D^2 G, D^3 G, computed once and shared between copies.
  const Expr& DG() const;
  const Expr& D2G() const;
  const Expr& D3G() const;

 private:
  struct Cache;
  Expr G_, H_;
  std::shared_ptr<Cache> cache_;
};

// D = d/dx + p d/dz + r d/dp + H d/dr
Expr total_D(const Expr& e, const PdeSystem& sys);
// Delta = d/dy + G d/dz + DG d/dp + D^2G d/dr
Expr total_Delta(const Expr& e, const PdeSystem& sys);

// Delta H - D^3 G
Expr integrability_residual(const PdeSystem& sys);

struct AdmissibilityReport {
  ZeroVerdict levi_degenerate;    // on G_r, expected zero
  ZeroVerdict two_nondegenerate;  // on G_pp, expected nonzero
  ZeroVerdict integrable;         // on Delta H - D^3 G, expected zero

  bool in_class() const { return levi_degenerate.zero() && !two_nondegenerate.zero() && integrable.zero(); }
};

AdmissibilityReport check_admissible(const PdeSystem& sys, const SampleConfig& cfg = {});

}  // namespace paracr
