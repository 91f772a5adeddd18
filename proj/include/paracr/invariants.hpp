#pragma once

#include <optional>

#include "paracr/jet.hpp"

namespace paracr {

// 9 D(D(H_r)) - 27 D(H_p) - 18 H_r D(H_r) + 18 H_p H_r + 4 H_r^3 + 54 H_z
Expr wunschmann(const PdeSystem& sys);
// 40 G_ppp^3 - 45 G_pp G_ppp G_pppp + 9 G_pp^2 G_ppppp
Expr monge(const Expr& G);
// 2 G_ppp + G_pp H_rr
Expr mixed_N(const PdeSystem& sys);
// H_rrrr
Expr chern(const Expr& H);

struct InvariantFlags {
  bool flat = false;
  bool contact_projective_pair = false;
};

struct InvariantReport {
  AdmissibilityReport admissibility;
  Expr W, M, N, Z;
  ZeroVerdict W_verdict, M_verdict, N_verdict, Z_verdict;
  // M / (2 G_pp^3) and N / G_pp; only formed when G_pp is nonzero.
  std::optional<Expr> B, C;
  // Only set for systems in the class.
  std::optional<InvariantFlags> flags;
};

class InadmissibleSystem : public std::runtime_error {
 public:
  explicit InadmissibleSystem(AdmissibilityReport report)
      : std::runtime_error("system is not an admissible para-CR structure"), report_(std::move(report)) {}
  const AdmissibilityReport& report() const { return report_; }

 private:
  AdmissibilityReport report_;
};

// Computes every invariant. Inadmissible systems still get a report, with
// the failing verdicts and without flags.
InvariantReport classify(const PdeSystem& sys, const SampleConfig& cfg = {});
// Same, but throws InadmissibleSystem instead of returning a flagless report.
InvariantReport classify_admissible(const PdeSystem& sys, const SampleConfig& cfg = {});

}  // namespace paracr
