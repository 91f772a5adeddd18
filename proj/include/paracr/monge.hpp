#pragma once

#include <array>
#include <stdexcept>
#include <utility>
#include <vector>

#include "paracr/linalg.hpp"

namespace paracr {

// det(conic_derivative_matrix(G)) = kConicKappa * G_pp^kConicAlpha * monge(G)
inline constexpr int kConicKappa = 8;
inline constexpr int kConicAlpha = 1;

// Row k holds the k-th p-derivative of [G^2, 2pG, p^2, G, p, 1], k = 0..5.
ExprMatrix conic_derivative_matrix(const Expr& G);

// Determinant of the matrix above. Throws std::logic_error if it does not
// factor as kConicKappa * G_pp^kConicAlpha * monge(G).
Expr elimination_determinant(const Expr& G);

class RankDeficiency : public std::runtime_error {
 public:
  explicit RankDeficiency(std::size_t nullity)
      : std::runtime_error("design matrix is rank deficient (nullity " + std::to_string(nullity) + ")"),
        nullity_(nullity) {}
  std::size_t nullity() const { return nullity_; }

 private:
  std::size_t nullity_;
};

// a1 G^2 + 2 a2 p G + a3 p^2 + a4 G + a5 p + a6, scaled so the coefficient
// of largest magnitude is +1.
struct ConicFit {
  std::array<double, 6> coeffs{};
  // Present when the samples were rational and lie exactly on a conic.
  std::optional<std::array<Rational, 6>> exact_coeffs;
  // Root-mean-square of the conic form over the samples, with the
  // coefficient vector scaled to unit Euclidean norm.
  double residual = 0;
};

// Exact nullspace when every sample lies on one conic; otherwise falls back
// to the floating least-squares fit. Needs at least six distinct p values.
ConicFit conic_fit(const std::vector<std::pair<Rational, Rational>>& samples);
ConicFit conic_fit(const std::vector<std::pair<double, double>>& samples);

}  // namespace paracr
