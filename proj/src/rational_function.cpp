#include "paracr/rational_function.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <unordered_map>

namespace paracr {

// ---------------------------------------------------------------------------
// Atom table

namespace {

struct AtomTable {
  std::mutex mu;
  std::unordered_map<std::string, AtomId> ids;
  std::deque<std::pair<std::string, Expr>> entries;  // stable references

  AtomId intern(const std::string& key, const Expr& e) {
    std::lock_guard<std::mutex> lock(mu);
    auto [it, fresh] = ids.emplace(key, static_cast<AtomId>(entries.size()));
    if (fresh) entries.emplace_back(key, e);
    return it->second;
  }
};

AtomTable& atoms() {
  static AtomTable table;
  return table;
}

}  // namespace

AtomId intern_variable(const std::string& name) { return atoms().intern("v:" + name, Expr::variable(name)); }

AtomId intern_function(const Expr& application) {
  if (application.kind() != ExprKind::Function) throw std::invalid_argument("intern_function needs an application");
  return atoms().intern("f:" + to_string(application), application);
}

Expr atom_expr(AtomId id) {
  auto& t = atoms();
  std::lock_guard<std::mutex> lock(t.mu);
  return t.entries.at(id).second;
}

const std::string& atom_key(AtomId id) {
  auto& t = atoms();
  std::lock_guard<std::mutex> lock(t.mu);
  return t.entries.at(id).first;
}

// ---------------------------------------------------------------------------
// Monomials

int monomial_degree(const Monomial& m) {
  int d = 0;
  for (const auto& [v, e] : m) d += e;
  return d;
}

bool GrlexLess::operator()(const Monomial& a, const Monomial& b) const {
  int da = monomial_degree(a), db = monomial_degree(b);
  if (da != db) return da < db;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].first == b[j].first) {
      if (a[i].second != b[j].second) return a[i].second < b[j].second;
      ++i;
      ++j;
    } else if (a[i].first < b[j].first) {
      return a[i].second < 0;
    } else {
      return b[j].second > 0;
    }
  }
  if (i < a.size()) return a[i].second < 0;
  if (j < b.size()) return b[j].second > 0;
  return false;
}

Monomial monomial_mul(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.push_back(b[j++]);
    } else {
      int e = a[i].second + b[j].second;
      if (e != 0) out.emplace_back(a[i].first, e);
      ++i;
      ++j;
    }
  }
  return out;
}

Monomial monomial_inverse(const Monomial& a) {
  Monomial out = a;
  for (auto& [v, e] : out) e = -e;
  return out;
}

namespace {

// a / b if every exponent stays non-negative.
bool monomial_divide(const Monomial& a, const Monomial& b, Monomial& out) {
  out = monomial_mul(a, monomial_inverse(b));
  for (const auto& [v, e] : out)
    if (e < 0) return false;
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// Polynomials

Polynomial::Polynomial(const Rational& c) {
  if (c != 0) terms_.emplace(Monomial{}, c);
}

Polynomial Polynomial::atom(AtomId id, int exponent) {
  Polynomial p;
  if (exponent == 0)
    p.terms_.emplace(Monomial{}, Rational(1));
  else
    p.terms_.emplace(Monomial{{id, exponent}}, Rational(1));
  return p;
}

Polynomial Polynomial::monomial(const Monomial& m, const Rational& c) {
  Polynomial p;
  if (c != 0) p.terms_.emplace(m, c);
  return p;
}

bool Polynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, fresh] = terms_.emplace(m, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial out = *this;
  for (const auto& [m, c] : o.terms_) out.add_term(m, c);
  return out;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
  Polynomial out = *this;
  for (const auto& [m, c] : o.terms_) out.add_term(m, -c);
  return out;
}

Polynomial Polynomial::operator-() const {
  Polynomial out = *this;
  for (auto& [m, c] : out.terms_) c = -c;
  return out;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  Polynomial out;
  for (const auto& [m1, c1] : terms_)
    for (const auto& [m2, c2] : o.terms_) out.add_term(monomial_mul(m1, m2), c1 * c2);
  return out;
}

Polynomial Polynomial::scaled(const Rational& c, const Monomial& m) const {
  Polynomial out;
  if (c == 0) return out;
  for (const auto& [m1, c1] : terms_) out.terms_.emplace_hint(out.terms_.end(), monomial_mul(m1, m), c1 * c);
  return out;
}

Polynomial Polynomial::pow(unsigned n) const {
  Polynomial result(Rational(1));
  Polynomial base = *this;
  while (n) {
    if (n & 1u) result = result * base;
    n >>= 1u;
    if (n) base = base * base;
  }
  return result;
}

Monomial Polynomial::min_monomial() const {
  if (terms_.empty()) return {};
  std::map<AtomId, int> mins;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (first) {
      for (const auto& [v, e] : m) mins[v] = e;
      first = false;
      continue;
    }
    // atoms missing from m have exponent 0
    for (auto& [v, e] : mins) {
      int here = 0;
      for (const auto& [w, f] : m)
        if (w == v) here = f;
      e = std::min(e, here);
    }
    for (const auto& [v, e] : m)
      if (!mins.count(v)) mins[v] = std::min(0, e);
  }
  Monomial out;
  for (const auto& [v, e] : mins)
    if (e != 0) out.emplace_back(v, e);
  return out;
}

bool Polynomial::has_negative_exponent() const {
  for (const auto& [m, c] : terms_)
    for (const auto& [v, e] : m)
      if (e < 0) return true;
  return false;
}

std::vector<AtomId> Polynomial::atoms() const {
  std::vector<AtomId> out;
  for (const auto& [m, c] : terms_)
    for (const auto& [v, e] : m) out.push_back(v);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

std::map<AtomId, int> max_degrees(const Polynomial& p) {
  std::map<AtomId, int> out;
  for (const auto& [m, c] : p.terms())
    for (const auto& [v, e] : m) out[v] = std::max(out[v], e);
  return out;
}

int total_degree(const Polynomial& p) { return p.is_zero() ? 0 : monomial_degree(p.leading_monomial()); }

}  // namespace

bool exact_divide(const Polynomial& num, const Polynomial& den, Polynomial& quotient) {
  if (den.is_zero()) throw std::domain_error("polynomial division by zero");
  quotient = Polynomial();
  if (num.is_zero()) return true;
  if (total_degree(den) > total_degree(num)) return false;
  auto dn = max_degrees(num);
  for (const auto& [v, e] : max_degrees(den)) {
    auto it = dn.find(v);
    if (it == dn.end() || it->second < e) return false;
  }
  Polynomial r = num;
  const Monomial& lm = den.leading_monomial();
  const Rational& lc = den.leading_coefficient();
  Monomial m;
  while (!r.is_zero()) {
    if (!monomial_divide(r.leading_monomial(), lm, m)) return false;
    Rational c = r.leading_coefficient() / lc;
    quotient.add_term(m, c);
    r = r - den.scaled(c, m);
  }
  return true;
}

// ---------------------------------------------------------------------------
// Rational functions

namespace {

// P = c * m * rest with rest monic and free of monomial content.
void split_content(const Polynomial& p, Rational& c, Monomial& m, Polynomial& rest) {
  m = p.min_monomial();
  c = p.leading_coefficient();
  Rational inv = 1 / c;
  rest = p.scaled(inv, monomial_inverse(m));
}

Polynomial product_of(const std::vector<std::pair<Polynomial, int>>& factors,
                      const std::vector<std::pair<Polynomial, int>>& minus) {
  Polynomial out(Rational(1));
  for (const auto& [f, e] : factors) {
    int k = e;
    for (const auto& [g, ge] : minus)
      if (g == f) k -= ge;
    if (k > 0) out = out * f.pow(static_cast<unsigned>(k));
  }
  return out;
}

}  // namespace

void RationalFunction::add_factor(Polynomial f, int exponent) {
  if (exponent <= 0) return;
  for (auto& [g, ge] : den_) {
    if (g == f) {
      ge += exponent;
      return;
    }
  }
  Polynomial q;
  for (std::size_t i = 0; i < den_.size(); ++i) {
    const Polynomial& g = den_[i].first;
    if (exact_divide(f, g, q)) {
      den_[i].second += exponent;
      add_factor(std::move(q), exponent);
      return;
    }
    if (exact_divide(g, f, q)) {
      int ge = den_[i].second;
      den_.erase(den_.begin() + static_cast<std::ptrdiff_t>(i));
      add_factor(std::move(f), exponent + ge);
      add_factor(std::move(q), ge);
      return;
    }
  }
  den_.emplace_back(std::move(f), exponent);
}

void RationalFunction::reduce() {
  if (num_.is_zero()) {
    den_.clear();
    return;
  }
  if (den_.empty()) return;
  Monomial shift = num_.min_monomial();
  Polynomial n = num_.scaled(Rational(1), monomial_inverse(shift));
  Polynomial q;
  for (auto& [f, e] : den_) {
    while (e > 0 && exact_divide(n, f, q)) {
      n = std::move(q);
      --e;
    }
  }
  den_.erase(std::remove_if(den_.begin(), den_.end(), [](const auto& fe) { return fe.second == 0; }), den_.end());
  num_ = n.scaled(Rational(1), shift);
}

RationalFunction RationalFunction::operator+(const RationalFunction& o) const {
  if (is_zero()) return o;
  if (o.is_zero()) return *this;
  if (den_.empty() && o.den_.empty()) return RationalFunction(num_ + o.num_);
  RationalFunction out;
  out.den_ = den_;
  for (const auto& [g, ge] : o.den_) {
    bool found = false;
    for (auto& [f, fe] : out.den_) {
      if (f == g) {
        fe = std::max(fe, ge);
        found = true;
        break;
      }
    }
    if (!found) out.den_.emplace_back(g, ge);
  }
  out.num_ = num_ * product_of(out.den_, den_) + o.num_ * product_of(out.den_, o.den_);
  out.reduce();
  return out;
}

RationalFunction RationalFunction::operator-() const {
  RationalFunction out = *this;
  out.num_ = -num_;
  return out;
}

RationalFunction RationalFunction::operator-(const RationalFunction& o) const { return *this + (-o); }

RationalFunction RationalFunction::operator*(const RationalFunction& o) const {
  if (is_zero() || o.is_zero()) return RationalFunction();
  RationalFunction out;
  out.num_ = num_ * o.num_;
  out.den_ = den_;
  for (const auto& [g, ge] : o.den_) out.add_factor(g, ge);
  if (!den_.empty() || !o.den_.empty()) out.reduce();
  return out;
}

RationalFunction RationalFunction::inverse() const {
  if (is_zero()) throw std::domain_error("inverse of a rational function that is identically zero");
  Rational c;
  Monomial m;
  Polynomial rest;
  split_content(num_, c, m, rest);
  RationalFunction out;
  out.num_ = product_of(den_, {}).scaled(1 / c, monomial_inverse(m));
  if (!rest.is_constant()) {
    out.add_factor(std::move(rest), 1);
    out.reduce();
  }
  return out;
}

RationalFunction RationalFunction::operator/(const RationalFunction& o) const { return *this * o.inverse(); }

RationalFunction RationalFunction::pow(int n) const {
  if (n == 0) return RationalFunction(Rational(1));
  if (n < 0) return inverse().pow(-n);
  if (n == 1) return *this;
  RationalFunction out;
  out.num_ = num_.pow(static_cast<unsigned>(n));
  for (const auto& [f, e] : den_) out.den_.emplace_back(f, e * n);
  if (!den_.empty()) out.reduce();
  return out;
}

namespace {

struct Piece {
  std::string key;
  Expr e;
};

std::vector<Piece> sorted_pieces(std::vector<Expr> parts) {
  std::vector<Piece> out;
  out.reserve(parts.size());
  for (auto& p : parts) out.push_back({to_string(p), std::move(p)});
  std::sort(out.begin(), out.end(), [](const Piece& a, const Piece& b) { return a.key < b.key; });
  return out;
}

Expr monomial_expr(const Monomial& m) {
  std::vector<Expr> factors;
  for (const auto& [v, e] : m) factors.push_back(make_power(atom_expr(v), e));
  auto pieces = sorted_pieces(std::move(factors));
  std::vector<Expr> out;
  for (auto& p : pieces) out.push_back(std::move(p.e));
  return make_product(std::move(out));
}

Expr polynomial_expr(const Polynomial& p) {
  std::vector<Expr> terms;
  for (const auto& [m, c] : p.terms()) terms.push_back(make_product({Expr::constant(c), monomial_expr(m)}));
  // constants last, everything else by printed form
  auto pieces = sorted_pieces(std::move(terms));
  std::stable_partition(pieces.begin(), pieces.end(), [](const Piece& pc) { return !pc.e.is_constant(); });
  std::vector<Expr> out;
  for (auto& pc : pieces) out.push_back(std::move(pc.e));
  return make_sum(std::move(out));
}

}  // namespace

Expr RationalFunction::to_expr() const {
  if (num_.is_zero()) return Expr();
  Monomial shift = num_.min_monomial();
  Monomial den_mono;
  for (const auto& [v, e] : shift)
    if (e < 0) den_mono.emplace_back(v, -e);
  Polynomial n = num_.scaled(Rational(1), den_mono);
  Expr numerator = polynomial_expr(n);
  if (den_.empty() && den_mono.empty()) return numerator;
  std::vector<Expr> dens;
  for (const auto& [v, e] : den_mono) dens.push_back(make_power(atom_expr(v), e));
  for (const auto& [f, e] : den_) dens.push_back(make_power(polynomial_expr(f), e));
  auto pieces = sorted_pieces(std::move(dens));
  std::vector<Expr> ds;
  for (auto& pc : pieces) ds.push_back(std::move(pc.e));
  return make_quotient(numerator, make_product(std::move(ds)));
}

namespace {

class Converter {
 public:
  RationalFunction operator()(const Expr& e) {
    if (auto it = memo_.find(e.node_id()); it != memo_.end()) return it->second;
    RationalFunction r = compute(e);
    memo_.emplace(e.node_id(), r);
    return r;
  }

 private:
  RationalFunction compute(const Expr& e) {
    switch (e.kind()) {
      case ExprKind::Constant:
        return RationalFunction(e.value());
      case ExprKind::Variable:
        return RationalFunction(Polynomial::atom(intern_variable(e.name())));
      case ExprKind::Function: {
        std::vector<Expr> args;
        for (const auto& a : e.operands()) args.push_back(simplify(a));
        Expr app = Expr::function(e.name(), std::move(args), e.orders());
        return RationalFunction(Polynomial::atom(intern_function(app)));
      }
      case ExprKind::Sum: {
        RationalFunction acc;
        for (const auto& t : e.operands()) acc = acc + (*this)(t);
        return acc;
      }
      case ExprKind::Product: {
        RationalFunction acc(Rational(1));
        for (const auto& f : e.operands()) {
          acc = acc * (*this)(f);
          if (acc.is_zero()) break;
        }
        return acc;
      }
      case ExprKind::Power:
        return (*this)(e.base()).pow(e.exponent());
      case ExprKind::Quotient:
        return (*this)(e.numerator()) / (*this)(e.denominator());
    }
    throw std::logic_error("unknown expression kind");
  }

  std::unordered_map<const detail::Node*, RationalFunction> memo_;
};

struct SimplifyCache {
  std::mutex mu;
  std::unordered_map<const detail::Node*, std::pair<Expr, Expr>> map;
};

SimplifyCache& simplify_cache() {
  static SimplifyCache cache;
  return cache;
}

}  // namespace

RationalFunction RationalFunction::from_expr(const Expr& e) { return Converter()(e); }

Expr simplify(const Expr& e) {
  if (e.kind() == ExprKind::Constant || e.kind() == ExprKind::Variable) return e;
  auto& cache = simplify_cache();
  {
    std::lock_guard<std::mutex> lock(cache.mu);
    if (auto it = cache.map.find(e.node_id()); it != cache.map.end()) return it->second.second;
  }
  Expr out = RationalFunction::from_expr(e).to_expr();
  {
    std::lock_guard<std::mutex> lock(cache.mu);
    if (cache.map.size() > 200000) cache.map.clear();
    cache.map.emplace(e.node_id(), std::make_pair(e, out));
  }
  return out;
}

bool is_structurally_zero(const Expr& e) { return simplify(e).is_zero_constant(); }

}  // namespace paracr
