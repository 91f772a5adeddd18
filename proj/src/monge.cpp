#include "paracr/monge.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <set>

#include "paracr/invariants.hpp"

namespace paracr {

ExprMatrix conic_derivative_matrix(const Expr& G) {
  Expr p = var("p");
  std::vector<Expr> row{pow(G, 2), Expr(2) * p * G, pow(p, 2), G, p, Expr(1)};
  ExprMatrix m;
  for (int k = 0; k < 6; ++k) {
    for (auto& e : row) e = simplify(e);
    m.push_back(row);
    for (auto& e : row) e = diff(e, "p");
  }
  return m;
}

Expr elimination_determinant(const Expr& G) {
  RationalFunction det = determinant(to_rf(conic_derivative_matrix(G)));
  RationalFunction gpp = RationalFunction::from_expr(diff(G, "p", 2));
  RationalFunction expected =
      RationalFunction(Rational(kConicKappa)) * gpp.pow(kConicAlpha) * RationalFunction::from_expr(monge(G));
  if (!(det - expected).is_zero())
    throw std::logic_error("conic elimination determinant does not factor through the Monge expression");
  return det.to_expr();
}

namespace {

std::array<Rational, 6> design_row(const Rational& p, const Rational& g) {
  return {g * g, 2 * p * g, p * p, g, p, Rational(1)};
}

std::array<double, 6> design_row(double p, double g) { return {g * g, 2 * p * g, p * p, g, p, 1.0}; }

template <typename T>
void require_distinct(const std::vector<std::pair<T, T>>& samples) {
  std::set<T> ps;
  for (const auto& s : samples) ps.insert(s.first);
  if (ps.size() < 6) throw std::invalid_argument("conic fit needs at least six distinct p values");
}

template <typename T>
std::array<T, 6> normalize_max(std::array<T, 6> a) {
  using std::abs;
  std::size_t best = 0;
  for (std::size_t i = 1; i < 6; ++i)
    if (abs(a[i]) > abs(a[best])) best = i;
  T s = a[best];
  for (auto& c : a) c /= s;
  return a;
}

double rms_unit(const std::vector<std::array<double, 6>>& rows, const std::array<double, 6>& c) {
  double norm = 0;
  for (double v : c) norm += v * v;
  norm = std::sqrt(norm);
  double acc = 0;
  for (const auto& r : rows) {
    double f = 0;
    for (std::size_t j = 0; j < 6; ++j) f += r[j] * c[j] / norm;
    acc += f * f;
  }
  return std::sqrt(acc / static_cast<double>(rows.size()));
}

ConicFit float_fit(const std::vector<std::array<double, 6>>& rows) {
  Eigen::MatrixXd A(static_cast<Eigen::Index>(rows.size()), 6);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < 6; ++j) A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  double tol = 1e-12 * sv(0);
  if (sv(4) <= tol) {
    std::size_t nullity = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv(i) <= tol) ++nullity;
    throw RankDeficiency(nullity);
  }
  std::array<double, 6> c;
  for (int j = 0; j < 6; ++j) c[static_cast<std::size_t>(j)] = svd.matrixV()(j, 5);
  ConicFit fit;
  fit.coeffs = normalize_max(c);
  fit.residual = rms_unit(rows, c);
  return fit;
}

// Nullspace of the rational design matrix by row reduction.
std::vector<std::array<Rational, 6>> nullspace(std::vector<std::array<Rational, 6>> rows) {
  std::vector<int> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < 6 && r < rows.size(); ++c) {
    std::size_t s = r;
    while (s < rows.size() && rows[s][c] == 0) ++s;
    if (s == rows.size()) continue;
    std::swap(rows[r], rows[s]);
    Rational inv = 1 / rows[r][c];
    for (auto& v : rows[r]) v *= inv;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c] == 0) continue;
      Rational f = rows[i][c];
      for (std::size_t j = 0; j < 6; ++j) rows[i][j] -= f * rows[r][j];
    }
    pivot_col.push_back(static_cast<int>(c));
    ++r;
  }
  std::vector<std::array<Rational, 6>> basis;
  for (int free = 0; free < 6; ++free) {
    bool is_pivot = false;
    for (int pc : pivot_col) is_pivot = is_pivot || pc == free;
    if (is_pivot) continue;
    std::array<Rational, 6> v{};
    v[static_cast<std::size_t>(free)] = 1;
    for (std::size_t i = 0; i < pivot_col.size(); ++i)
      v[static_cast<std::size_t>(pivot_col[i])] = -rows[i][static_cast<std::size_t>(free)];
    basis.push_back(v);
  }
  return basis;
}

}  // namespace

ConicFit conic_fit(const std::vector<std::pair<Rational, Rational>>& samples) {
  require_distinct(samples);
  std::vector<std::array<Rational, 6>> rows;
  for (const auto& [p, g] : samples) rows.push_back(design_row(p, g));
  auto null = nullspace(rows);
  if (null.size() > 1) throw RankDeficiency(null.size());
  if (null.empty()) {
    std::vector<std::array<double, 6>> frows;
    for (const auto& [p, g] : samples) frows.push_back(design_row(p.get_d(), g.get_d()));
    return float_fit(frows);
  }
  ConicFit fit;
  auto exact = normalize_max(null.front());
  fit.exact_coeffs = exact;
  for (std::size_t j = 0; j < 6; ++j) fit.coeffs[j] = exact[j].get_d();
  fit.residual = 0;
  return fit;
}

ConicFit conic_fit(const std::vector<std::pair<double, double>>& samples) {
  require_distinct(samples);
  std::vector<std::array<double, 6>> rows;
  for (const auto& [p, g] : samples) rows.push_back(design_row(p, g));
  return float_fit(rows);
}

}  // namespace paracr
