#include "paracr/forms.hpp"

#include <algorithm>
#include <sstream>

#include "paracr/rational_function.hpp"

namespace paracr {

Chart::Chart(std::vector<std::string> names) : names_(std::move(names)) {
  std::vector<std::string> sorted = names_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("chart coordinates must be distinct");
}

std::size_t Chart::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  throw std::invalid_argument("'" + name + "' is not a coordinate of this chart");
}

ChartPtr make_chart(std::vector<std::string> names) { return std::make_shared<const Chart>(std::move(names)); }

const ChartPtr& jet_chart() {
  static const ChartPtr chart = make_chart({"x", "y", "z", "p", "r"});
  return chart;
}

namespace {

// Sorts idx in place; returns 0 for a repeated index, else the permutation sign.
int normalize_index(FormIndex& idx) {
  int sign = 1;
  for (std::size_t i = 1; i < idx.size(); ++i) {
    for (std::size_t j = i; j > 0 && idx[j - 1] >= idx[j]; --j) {
      if (idx[j - 1] == idx[j]) return 0;
      std::swap(idx[j - 1], idx[j]);
      sign = -sign;
    }
  }
  return sign;
}

// Collects unsimplified contributions and simplifies each coefficient once.
class Accumulator {
 public:
  void add(FormIndex idx, const Expr& c) {
    if (c.is_zero_constant()) return;
    int s = normalize_index(idx);
    if (s == 0) return;
    parts_[idx].push_back(s < 0 ? -c : c);
  }

  KForm finish(int degree, ChartPtr chart, CoframePtr basis) {
    KForm out(degree, std::move(chart), std::move(basis));
    for (auto& [idx, cs] : parts_) out.add(idx, make_sum(std::move(cs)));
    return out;
  }

 private:
  std::map<FormIndex, std::vector<Expr>> parts_;
};

}  // namespace

// ---------------------------------------------------------------------------
// KForm

KForm::KForm(int degree, ChartPtr chart, CoframePtr basis)
    : degree_(degree), chart_(std::move(chart)), basis_(std::move(basis)) {
  if (!chart_) throw std::invalid_argument("form without a chart");
  if (degree_ < 0 || static_cast<std::size_t>(degree_) > chart_->dim())
    throw std::invalid_argument("form degree out of range");
  if (basis_ && basis_->chart() != chart_) throw BasisMismatch("coframe belongs to a different chart");
}

KForm KForm::scalar(const Expr& f, ChartPtr chart, CoframePtr basis) {
  KForm out(0, std::move(chart), std::move(basis));
  out.add({}, f);
  return out;
}

KForm KForm::basis_form(int i, ChartPtr chart, CoframePtr basis) {
  KForm out(1, std::move(chart), std::move(basis));
  if (i < 0 || static_cast<std::size_t>(i) >= out.chart_->dim()) throw std::out_of_range("basis index out of range");
  out.add({i}, Expr(1));
  return out;
}

KForm KForm::d(const std::string& coordinate, ChartPtr chart) {
  int i = static_cast<int>(chart->index_of(coordinate));
  return basis_form(i, std::move(chart));
}

Expr KForm::coefficient(const FormIndex& idx) const {
  auto it = terms_.find(idx);
  return it == terms_.end() ? Expr() : it->second;
}

void KForm::add(FormIndex idx, const Expr& c) {
  if (static_cast<int>(idx.size()) != degree_) throw std::invalid_argument("index length does not match degree");
  for (int i : idx)
    if (i < 0 || static_cast<std::size_t>(i) >= chart_->dim()) throw std::out_of_range("basis index out of range");
  int s = normalize_index(idx);
  if (s == 0 || c.is_zero_constant()) return;
  auto it = terms_.find(idx);
  Expr next = simplify(it == terms_.end() ? (s < 0 ? -c : c) : it->second + (s < 0 ? -c : c));
  if (next.is_zero_constant()) {
    if (it != terms_.end()) terms_.erase(it);
  } else if (it == terms_.end()) {
    terms_.emplace(std::move(idx), next);
  } else {
    it->second = next;
  }
}

void KForm::require_compatible(const KForm& o) const {
  if (chart_ != o.chart_) throw BasisMismatch("forms live on different charts");
  if (basis_ != o.basis_) throw BasisMismatch("forms are expressed in different bases");
}

KForm KForm::operator+(const KForm& o) const {
  require_compatible(o);
  if (degree_ != o.degree_) throw std::invalid_argument("adding forms of different degree");
  KForm out = *this;
  for (const auto& [idx, c] : o.terms_) out.add(idx, c);
  return out;
}

KForm KForm::operator-() const {
  KForm out = *this;
  for (auto& [idx, c] : out.terms_) c = simplify(-c);
  return out;
}

KForm KForm::operator-(const KForm& o) const { return *this + (-o); }

KForm KForm::operator*(const Expr& f) const {
  KForm out(degree_, chart_, basis_);
  for (const auto& [idx, c] : terms_) out.add(idx, c * f);
  return out;
}

KForm operator*(const Expr& f, const KForm& a) { return a * f; }

// ---------------------------------------------------------------------------
// Coframe

CoframePtr Coframe::make(std::vector<KForm> forms) {
  if (forms.empty()) throw std::invalid_argument("empty coframe");
  ChartPtr chart = forms.front().chart();
  if (forms.size() != chart->dim()) throw std::invalid_argument("a coframe needs one form per coordinate");
  ExprMatrix m;
  for (auto& f : forms) {
    if (f.degree() != 1) throw std::invalid_argument("coframe forms must be 1-forms");
    if (f.chart() != chart) throw BasisMismatch("coframe forms live on different charts");
    if (f.basis()) f = to_coordinates(f);
    std::vector<Expr> row;
    for (std::size_t j = 0; j < chart->dim(); ++j) row.push_back(f.coefficient({static_cast<int>(j)}));
    m.push_back(row);
  }
  auto inv = inverse(m);
  if (!inv) throw SingularTransition("coframe transition matrix is singular");
  auto cf = std::shared_ptr<Coframe>(new Coframe());
  cf->chart_ = chart;
  cf->forms_ = std::move(forms);
  cf->matrix_ = std::move(m);
  cf->inverse_ = std::move(*inv);
  return cf;
}

KForm Coframe::basis_form(int i) const { return KForm::basis_form(i, chart_, shared_from_this()); }

VectorField coordinate_field(const std::string& coordinate, ChartPtr chart) {
  VectorField X{chart, std::vector<Expr>(chart->dim())};
  X.components[chart->index_of(coordinate)] = Expr(1);
  return X;
}

// ---------------------------------------------------------------------------
// Operations

KForm wedge(const KForm& a, const KForm& b) {
  if (a.chart() != b.chart()) throw BasisMismatch("wedge of forms on different charts");
  if (a.basis() != b.basis()) throw BasisMismatch("wedge of forms in different bases");
  int deg = a.degree() + b.degree();
  if (static_cast<std::size_t>(deg) > a.chart()->dim()) throw std::invalid_argument("wedge degree exceeds dimension");
  Accumulator acc;
  for (const auto& [i, c] : a.terms()) {
    for (const auto& [j, e] : b.terms()) {
      FormIndex idx = i;
      idx.insert(idx.end(), j.begin(), j.end());
      acc.add(std::move(idx), c * e);
    }
  }
  return acc.finish(deg, a.chart(), a.basis());
}

KForm wedge(const std::vector<KForm>& forms) {
  if (forms.empty()) throw std::invalid_argument("wedge of no forms");
  KForm out = forms.front();
  for (std::size_t i = 1; i < forms.size(); ++i) out = wedge(out, forms[i]);
  return out;
}

namespace {

// Replaces each basis 1-form e_i of a by images[i] and expands.
KForm expand(const KForm& a, const std::vector<KForm>& images, ChartPtr chart, CoframePtr basis) {
  Accumulator acc;
  for (const auto& [idx, c] : a.terms()) {
    // expand the wedge of images term by term
    std::map<FormIndex, Expr> partial{{FormIndex{}, c}};
    for (int i : idx) {
      std::map<FormIndex, Expr> next;
      for (const auto& [pidx, pc] : partial) {
        for (const auto& [iidx, ic] : images.at(static_cast<std::size_t>(i)).terms()) {
          if (std::find(pidx.begin(), pidx.end(), iidx[0]) != pidx.end()) continue;
          FormIndex n = pidx;
          n.push_back(iidx[0]);
          auto it = next.find(n);
          if (it == next.end())
            next.emplace(std::move(n), pc * ic);
          else
            it->second = it->second + pc * ic;
        }
      }
      partial = std::move(next);
    }
    for (auto& [pidx, pc] : partial) acc.add(pidx, pc);
  }
  return acc.finish(a.degree(), std::move(chart), std::move(basis));
}

}  // namespace

KForm to_coordinates(const KForm& a) {
  if (!a.basis()) return a;
  const auto& cf = a.basis();
  std::vector<KForm> images;
  for (std::size_t i = 0; i < cf->forms().size(); ++i) images.push_back(to_coordinates(cf->form(i)));
  return expand(a, images, a.chart(), nullptr);
}

KForm change_basis(const KForm& a, const CoframePtr& cf) {
  if (a.basis() == cf) return a;
  KForm coords = to_coordinates(a);
  if (!cf) return coords;
  if (cf->chart() != a.chart()) throw BasisMismatch("coframe belongs to a different chart");
  const auto& inv = cf->inverse_matrix();
  std::vector<KForm> images;
  for (std::size_t j = 0; j < inv.size(); ++j) {
    KForm img(1, a.chart(), cf);
    for (std::size_t i = 0; i < inv[j].size(); ++i) img.add({static_cast<int>(i)}, inv[j][i]);
    images.push_back(std::move(img));
  }
  return expand(coords, images, a.chart(), cf);
}

KForm exterior_derivative(const KForm& a0) {
  KForm a = to_coordinates(a0);
  if (static_cast<std::size_t>(a.degree()) == a.chart()->dim()) return KForm(a.degree(), a.chart());
  const auto& names = a.chart()->names();
  Accumulator acc;
  for (const auto& [idx, c] : a.terms()) {
    for (std::size_t j = 0; j < names.size(); ++j) {
      if (std::find(idx.begin(), idx.end(), static_cast<int>(j)) != idx.end()) continue;
      Expr dc = diff(c, names[j]);
      if (dc.is_zero_constant()) continue;
      FormIndex n{static_cast<int>(j)};
      n.insert(n.end(), idx.begin(), idx.end());
      acc.add(std::move(n), dc);
    }
  }
  return acc.finish(a.degree() + 1, a.chart(), nullptr);
}

KForm interior_product(const VectorField& X, const KForm& a0) {
  KForm a = to_coordinates(a0);
  if (X.chart != a.chart()) throw BasisMismatch("vector field and form live on different charts");
  if (a.degree() == 0) throw std::invalid_argument("interior product of a 0-form");
  Accumulator acc;
  for (const auto& [idx, c] : a.terms()) {
    for (std::size_t m = 0; m < idx.size(); ++m) {
      const Expr& xm = X.components.at(static_cast<std::size_t>(idx[m]));
      if (xm.is_zero_constant()) continue;
      FormIndex rest;
      for (std::size_t k = 0; k < idx.size(); ++k)
        if (k != m) rest.push_back(idx[k]);
      Expr t = xm * c;
      acc.add(std::move(rest), m % 2 ? -t : t);
    }
  }
  return acc.finish(a.degree() - 1, a.chart(), nullptr);
}

KForm lie_derivative(const VectorField& X, const KForm& a0) {
  KForm a = to_coordinates(a0);
  KForm first = interior_product(X, exterior_derivative(a));
  if (a.degree() == 0) return first;
  return first + exterior_derivative(interior_product(X, a));
}

CoframePtr standard_coframe(const PdeSystem& sys) {
  const ChartPtr& c = jet_chart();
  auto dx = KForm::d("x", c), dy = KForm::d("y", c), dz = KForm::d("z", c), dp = KForm::d("p", c),
       dr = KForm::d("r", c);
  return Coframe::make({dz - var("p") * dx - sys.G() * dy, dp - var("r") * dx - sys.DG() * dy,
                        dr - sys.H() * dx - sys.D2G() * dy, dx, dy});
}

Expr LeviForm::det() const { return simplify(L[0][0] * L[1][1] - L[0][1] * L[1][0]); }

LeviForm levi_form(const PdeSystem& sys) {
  auto cf = standard_coframe(sys);
  KForm dw1 = change_basis(exterior_derivative(cf->form(0)), cf);
  LeviForm lf{{{dw1.coefficient({1, 3}), dw1.coefficient({1, 4})}, {dw1.coefficient({2, 3}), dw1.coefficient({2, 4})}},
              KForm(2, jet_chart(), cf)};
  for (const auto& [idx, c] : dw1.terms()) {
    if (idx == FormIndex{1, 3} || idx == FormIndex{1, 4} || idx == FormIndex{2, 3} || idx == FormIndex{2, 4}) continue;
    lf.remainder.add(idx, c);
  }
  if (!wedge(lf.remainder, cf->basis_form(0)).is_zero())
    throw std::logic_error("d omega^1 is not congruent to its Levi part modulo omega^1");
  return lf;
}

std::vector<KForm> frobenius_residual(const std::vector<KForm>& generators) {
  if (generators.empty()) throw std::invalid_argument("no generators");
  std::vector<KForm> gens;
  for (const auto& g : generators) {
    if (g.degree() != 1) throw std::invalid_argument("generators must be 1-forms");
    gens.push_back(to_coordinates(g));
  }
  KForm top = wedge(gens);
  if (top.is_zero()) throw DependentGenerators("generators are linearly dependent");
  std::vector<KForm> out;
  for (const auto& g : gens) out.push_back(wedge(exterior_derivative(g), top));
  return out;
}

std::array<KForm, 5> symmetry_residuals(const VectorField& X, const PdeSystem& sys) {
  auto cf = standard_coframe(sys);
  const auto& w = cf->forms();
  KForm w123 = wedge({w[0], w[1], w[2]});
  KForm w145 = wedge({w[0], w[3], w[4]});
  return {wedge(lie_derivative(X, w[0]), w[0]), wedge(lie_derivative(X, w[1]), w123),
          wedge(lie_derivative(X, w[2]), w123), wedge(lie_derivative(X, w[3]), w145),
          wedge(lie_derivative(X, w[4]), w145)};
}

KForm pullback(const KForm& a0, const CoordinateMap& map) {
  KForm a = to_coordinates(a0);
  if (a.chart() != map.source) throw BasisMismatch("form does not live on the map's source chart");
  const auto& src = map.source->names();
  const auto& tgt = map.target->names();
  std::vector<KForm> images;
  for (const auto& s : src) {
    auto it = map.components.find(s);
    if (it == map.components.end()) throw std::invalid_argument("coordinate map has no component for '" + s + "'");
    KForm img(1, map.target);
    for (std::size_t k = 0; k < tgt.size(); ++k) img.add({static_cast<int>(k)}, diff(it->second, tgt[k]));
    images.push_back(std::move(img));
  }
  KForm substituted(a.degree(), a.chart());
  for (const auto& [idx, c] : a.terms()) substituted.add(idx, substitute(c, map.components));
  return expand(substituted, images, map.target, nullptr);
}

ZeroVerdict form_verdict(const KForm& a, const SampleConfig& cfg) {
  std::vector<ZeroVerdict> vs;
  for (const auto& [idx, c] : a.terms()) vs.push_back(is_zero(c, cfg));
  return combine(vs);
}

std::string to_string(const KForm& a) {
  if (a.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [idx, c] : a.terms()) {
    if (!first) os << " + ";
    first = false;
    os << '(' << to_string(c) << ')';
    for (std::size_t k = 0; k < idx.size(); ++k) {
      os << (k ? "^" : "*");
      if (a.basis())
        os << 'e' << idx[k] + 1;
      else
        os << 'd' << a.chart()->names()[static_cast<std::size_t>(idx[k])];
    }
  }
  return os.str();
}

}  // namespace paracr
