#include "paracr/linalg.hpp"

#include <stdexcept>

namespace paracr {

RfMatrix to_rf(const ExprMatrix& m) {
  RfMatrix out;
  for (const auto& row : m) {
    out.emplace_back();
    for (const auto& e : row) out.back().push_back(RationalFunction::from_expr(e));
  }
  return out;
}

ExprMatrix to_expr(const RfMatrix& m) {
  ExprMatrix out;
  for (const auto& row : m) {
    out.emplace_back();
    for (const auto& e : row) out.back().push_back(e.to_expr());
  }
  return out;
}

namespace {

void require_square(const RfMatrix& m) {
  for (const auto& row : m)
    if (row.size() != m.size()) throw std::invalid_argument("matrix is not square");
}

}  // namespace

RationalFunction determinant(RfMatrix m) {
  require_square(m);
  const std::size_t n = m.size();
  if (n == 0) return RationalFunction(Rational(1));
  RationalFunction prev(Rational(1));
  bool negate = false;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k].is_zero()) {
      std::size_t s = k + 1;
      while (s < n && m[s][k].is_zero()) ++s;
      if (s == n) return RationalFunction();
      std::swap(m[k], m[s]);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
      m[i][k] = RationalFunction();
    }
    prev = m[k][k];
  }
  return negate ? -m[n - 1][n - 1] : m[n - 1][n - 1];
}

Expr determinant(const ExprMatrix& m) { return determinant(to_rf(m)).to_expr(); }

std::optional<RfMatrix> inverse(const RfMatrix& m) {
  require_square(m);
  const std::size_t n = m.size();
  RfMatrix a = m;
  RfMatrix inv(n, std::vector<RationalFunction>(n));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = RationalFunction(Rational(1));
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t s = k;
    while (s < n && a[s][k].is_zero()) ++s;
    if (s == n) return std::nullopt;
    std::swap(a[k], a[s]);
    std::swap(inv[k], inv[s]);
    RationalFunction piv = a[k][k].inverse();
    for (std::size_t j = 0; j < n; ++j) {
      if (!a[k][j].is_zero()) a[k][j] = a[k][j] * piv;
      if (!inv[k][j].is_zero()) inv[k][j] = inv[k][j] * piv;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || a[i][k].is_zero()) continue;
      RationalFunction f = a[i][k];
      for (std::size_t j = 0; j < n; ++j) {
        if (!a[k][j].is_zero()) a[i][j] = a[i][j] - f * a[k][j];
        if (!inv[k][j].is_zero()) inv[i][j] = inv[i][j] - f * inv[k][j];
      }
    }
  }
  return inv;
}

std::optional<ExprMatrix> inverse(const ExprMatrix& m) {
  auto r = inverse(to_rf(m));
  if (!r) return std::nullopt;
  return to_expr(*r);
}

}  // namespace paracr
