#pragma once

#include <optional>
#include <vector>

#include "paracr/rational_function.hpp"

namespace paracr {

using ExprMatrix = std::vector<std::vector<Expr>>;
using RfMatrix = std::vector<std::vector<RationalFunction>>;

RfMatrix to_rf(const ExprMatrix& m);
ExprMatrix to_expr(const RfMatrix& m);

// Fraction-free (Bareiss) elimination with row pivoting.
RationalFunction determinant(RfMatrix m);
Expr determinant(const ExprMatrix& m);

// Gauss-Jordan inverse; nullopt when the matrix is singular.
std::optional<RfMatrix> inverse(const RfMatrix& m);
std::optional<ExprMatrix> inverse(const ExprMatrix& m);

}  // namespace paracr
