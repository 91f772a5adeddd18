#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "paracr/forms.hpp"
#include "paracr/invariants.hpp"

namespace paracr {

// G = p^2/4, H = 0
PdeSystem flat_model();

class DegenerateProfile : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// G = f(p), H = -r^2 f'''(p) / f''(p). f is an expression in p, either a
// concrete polynomial or an opaque application such as f(p). Throws
// DegenerateProfile when f'' vanishes identically or f depends on other
// coordinates.
PdeSystem f_family(const Expr& f, const SampleConfig& cfg = {});

// (X, Y, P, Q, q)
const ChartPtr& example_chart();
// x, y, z, p, r as functions of (X, Y, P, Q, q).
CoordinateMap example_coordinate_map(const Expr& f);
// Rows of the special para-CR rescaling, acting on (w1..w5).
ExprMatrix example_rescaling(const Expr& f);
// Coframe before and after the rescaling, in (X, Y, P, Q, q).
std::array<KForm, 5> example_intermediate_coframe(const Expr& f);
std::array<KForm, 5> example_target_coframe(const Expr& f);
// Zero pattern and invertible diagonal blocks of the allowed rescalings.
bool in_rescaling_group(const ExprMatrix& m, const SampleConfig& cfg = {});

struct GeodesicResidual {
  // Components along e1, e2, e3 as functions of t.
  std::array<Expr, 3> components;
  ZeroVerdict verdict;
  // A rational t with f''(t) = 0, where the connection is singular.
  std::optional<Rational> singular_t;
};

// Geodesic equations along gamma(t) = (t, c1 f(t) + c2 t + c3, c1 f'(t) + c2)
// in the frame (d_Y, d_P, d_X + P d_Y), with Gamma^2_23 = Gamma^2_32 =
// gamma23 (default -f'''/(2 f'')) and every other symbol zero.
GeodesicResidual geodesic_residual(const Expr& f, const Expr& c1, const Expr& c2, const Expr& c3,
                                   const std::optional<Expr>& gamma23 = std::nullopt, const SampleConfig& cfg = {});
GeodesicResidual geodesic_residual(const Expr& f, const Rational& c1, const Rational& c2, const Rational& c3,
                                   const std::optional<Expr>& gamma23 = std::nullopt, const SampleConfig& cfg = {});

struct ExampleReport {
  Expr f;
  AdmissibilityReport admissibility;
  ZeroVerdict N_zero;
  ZeroVerdict chern_zero;
  ZeroVerdict wunschmann;
  // W - 2 r^3 B
  ZeroVerdict wunschmann_vs_monge;
  // Pulled-back coframe against the expected coordinate forms, then the
  // rescaled coframe against the target coframe.
  std::array<ZeroVerdict, 5> coordinate_match;
  std::array<ZeroVerdict, 5> pullback_match;
  bool rescaling_in_group = false;
  // Y = c1 f + c2 X + c3 solves Y''' = Y'' f'''/f''.
  ZeroVerdict general_solution;
  ZeroVerdict tangent;
  ZeroVerdict contact_tangency;
  ZeroVerdict geodesic_residual;
  std::vector<std::string> warnings;

  // Every verdict expected to vanish does; W may take any value.
  bool passed() const;
};

ExampleReport run_example_suite(const Expr& f, const SampleConfig& cfg = {});

}  // namespace paracr
