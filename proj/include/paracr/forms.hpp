#pragma once

#include <array>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "paracr/jet.hpp"
#include "paracr/linalg.hpp"

namespace paracr {

// An ordered list of coordinate names. Forms on different charts never mix.
class Chart {
 public:
  explicit Chart(std::vector<std::string> names);
  const std::vector<std::string>& names() const { return names_; }
  std::size_t dim() const { return names_.size(); }
  std::size_t index_of(const std::string& name) const;

 private:
  std::vector<std::string> names_;
};

using ChartPtr = std::shared_ptr<const Chart>;

ChartPtr make_chart(std::vector<std::string> names);
// (x, y, z, p, r)
const ChartPtr& jet_chart();

class Coframe;
using CoframePtr = std::shared_ptr<const Coframe>;

class BasisMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class SingularTransition : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Strictly increasing basis indices.
using FormIndex = std::vector<int>;

// Sparse k-form. The basis is either the coordinate differentials of the
// chart (basis() == nullptr) or the 1-forms of a coframe. Coefficients are
// kept simplified and zero coefficients are dropped.
class KForm {
 public:
  KForm(int degree, ChartPtr chart, CoframePtr basis = nullptr);

  static KForm scalar(const Expr& f, ChartPtr chart, CoframePtr basis = nullptr);
  // The i-th basis 1-form (dx_i, or the i-th coframe form).
  static KForm basis_form(int i, ChartPtr chart, CoframePtr basis = nullptr);
  static KForm d(const std::string& coordinate, ChartPtr chart);

  int degree() const { return degree_; }
  const ChartPtr& chart() const { return chart_; }
  const CoframePtr& basis() const { return basis_; }
  const std::map<FormIndex, Expr>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Expr coefficient(const FormIndex& idx) const;

  // Adds c * e_{idx[0]} ^ ... ^ e_{idx[k-1]}; idx may be unsorted.
  void add(FormIndex idx, const Expr& c);

  KForm operator+(const KForm& o) const;
  KForm operator-(const KForm& o) const;
  KForm operator-() const;
  KForm operator*(const Expr& f) const;

 private:
  void require_compatible(const KForm& o) const;

  int degree_;
  ChartPtr chart_;
  CoframePtr basis_;
  std::map<FormIndex, Expr> terms_;
};

KForm operator*(const Expr& f, const KForm& a);

// Five (or dim) independent 1-forms in the coordinate basis, with the
// transition matrix M (row i = components of form i) and its inverse.
class Coframe : public std::enable_shared_from_this<Coframe> {
 public:
  // Throws SingularTransition when the forms are dependent.
  static CoframePtr make(std::vector<KForm> forms);

  const ChartPtr& chart() const { return chart_; }
  const std::vector<KForm>& forms() const { return forms_; }
  const KForm& form(std::size_t i) const { return forms_.at(i); }
  const ExprMatrix& matrix() const { return matrix_; }
  const ExprMatrix& inverse_matrix() const { return inverse_; }

  // The i-th form expressed in its own basis.
  KForm basis_form(int i) const;

 private:
  Coframe() = default;
  ChartPtr chart_;
  std::vector<KForm> forms_;
  ExprMatrix matrix_, inverse_;
};

struct VectorField {
  ChartPtr chart;
  std::vector<Expr> components;
};

VectorField coordinate_field(const std::string& coordinate, ChartPtr chart);

KForm wedge(const KForm& a, const KForm& b);
KForm wedge(const std::vector<KForm>& forms);
// Coefficient forms are converted to the coordinate basis first.
KForm exterior_derivative(const KForm& a);
KForm interior_product(const VectorField& X, const KForm& a);
KForm lie_derivative(const VectorField& X, const KForm& a);

// Rewrites a in the coframe basis, or back to coordinates when cf is null.
KForm change_basis(const KForm& a, const CoframePtr& cf);
KForm to_coordinates(const KForm& a);

// omega^1 = dz - p dx - G dy, omega^2 = dp - r dx - DG dy,
// omega^3 = dr - H dx - D^2G dy, omega^4 = dx, omega^5 = dy
CoframePtr standard_coframe(const PdeSystem& sys);

struct LeviForm {
  // Coefficients of w2^w4, w2^w5 (row 0) and w3^w4, w3^w5 (row 1) in d w1.
  ExprMatrix L;
  KForm remainder;
  Expr det() const;
};

// Throws std::logic_error if the remainder is not a multiple of omega^1.
LeviForm levi_form(const PdeSystem& sys);

class DependentGenerators : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// d theta^a ^ theta^1 ^ ... ^ theta^k for each generator.
std::vector<KForm> frobenius_residual(const std::vector<KForm>& generators);

// (L_X w1)^w1, (L_X w2)^w1^w2^w3, (L_X w3)^w1^w2^w3,
// (L_X w4)^w1^w4^w5, (L_X w5)^w1^w4^w5
std::array<KForm, 5> symmetry_residuals(const VectorField& X, const PdeSystem& sys);

// Source coordinates written as expressions in the target chart.
struct CoordinateMap {
  ChartPtr source, target;
  std::map<std::string, Expr> components;
};

KForm pullback(const KForm& a, const CoordinateMap& map);

ZeroVerdict form_verdict(const KForm& a, const SampleConfig& cfg = {});

std::string to_string(const KForm& a);

}  // namespace paracr
