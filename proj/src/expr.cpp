#include "paracr/expr.hpp"

#include <functional>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace paracr {

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::shared_ptr<detail::Node> new_node(ExprKind kind) {
  auto n = std::make_shared<detail::Node>();
  n->kind = kind;
  return n;
}

void finish_hash(detail::Node& n) {
  std::size_t h = std::hash<int>{}(static_cast<int>(n.kind));
  switch (n.kind) {
    case ExprKind::Constant:
      h = mix(h, std::hash<std::string>{}(n.value.get_str()));
      break;
    case ExprKind::Variable:
      h = mix(h, std::hash<std::string>{}(n.name));
      break;
    case ExprKind::Function:
      h = mix(h, std::hash<std::string>{}(n.name));
      for (int o : n.orders) h = mix(h, std::hash<int>{}(o));
      break;
    case ExprKind::Power:
      h = mix(h, std::hash<int>{}(n.exponent));
      break;
    default:
      break;
  }
  for (const auto& c : n.children) h = mix(h, c.hash());
  n.hash = h;
}

const std::shared_ptr<const detail::Node>& zero_node() {
  static const std::shared_ptr<const detail::Node> z = [] {
    auto n = new_node(ExprKind::Constant);
    n->value = 0;
    finish_hash(*n);
    return std::shared_ptr<const detail::Node>(n);
  }();
  return z;
}

}  // namespace

Expr::Expr() : node_(zero_node()) {}

Expr::Expr(int value) : Expr(constant(Rational(value))) {}

Expr::Expr(const Rational& value) : Expr(constant(value)) {}

Expr Expr::constant(const Rational& value) {
  if (value == 0) return Expr();
  auto n = new_node(ExprKind::Constant);
  n->value = value;
  n->value.canonicalize();
  finish_hash(*n);
  return Expr(std::shared_ptr<const detail::Node>(n));
}

Expr Expr::variable(std::string name) {
  if (name.empty()) throw std::invalid_argument("variable name must not be empty");
  auto n = new_node(ExprKind::Variable);
  n->name = std::move(name);
  finish_hash(*n);
  return Expr(std::shared_ptr<const detail::Node>(n));
}

Expr Expr::function(std::string name, std::vector<Expr> args, std::vector<int> orders) {
  if (name.empty()) throw std::invalid_argument("function name must not be empty");
  if (args.empty()) throw std::invalid_argument("function '" + name + "' needs at least one argument");
  if (orders.empty()) orders.assign(args.size(), 0);
  if (orders.size() != args.size())
    throw std::invalid_argument("function '" + name + "': one derivative order per argument expected");
  for (int o : orders)
    if (o < 0) throw std::invalid_argument("function '" + name + "': negative derivative order");
  auto n = new_node(ExprKind::Function);
  n->name = std::move(name);
  n->children = std::move(args);
  n->orders = std::move(orders);
  finish_hash(*n);
  return Expr(std::shared_ptr<const detail::Node>(n));
}

Expr Expr::function(std::string name, const Expr& arg, int order) {
  return function(std::move(name), std::vector<Expr>{arg}, std::vector<int>{order});
}

ExprKind Expr::kind() const { return node_->kind; }

bool Expr::is_constant(long v) const { return kind() == ExprKind::Constant && node_->value == v; }

const Rational& Expr::value() const {
  if (kind() != ExprKind::Constant) throw std::logic_error("value() on a non-constant expression");
  return node_->value;
}

const std::string& Expr::name() const {
  if (kind() != ExprKind::Variable && kind() != ExprKind::Function)
    throw std::logic_error("name() on an expression without a name");
  return node_->name;
}

const std::vector<Expr>& Expr::operands() const { return node_->children; }
const std::vector<int>& Expr::orders() const { return node_->orders; }

int Expr::exponent() const {
  if (kind() != ExprKind::Power) throw std::logic_error("exponent() on a non-power");
  return node_->exponent;
}

const Expr& Expr::base() const {
  if (kind() != ExprKind::Power) throw std::logic_error("base() on a non-power");
  return node_->children[0];
}

const Expr& Expr::numerator() const {
  if (kind() != ExprKind::Quotient) throw std::logic_error("numerator() on a non-quotient");
  return node_->children[0];
}

const Expr& Expr::denominator() const {
  if (kind() != ExprKind::Quotient) throw std::logic_error("denominator() on a non-quotient");
  return node_->children[1];
}

std::size_t Expr::hash() const { return node_->hash; }

bool Expr::operator==(const Expr& other) const {
  if (node_ == other.node_) return true;
  const auto& a = *node_;
  const auto& b = *other.node_;
  if (a.hash != b.hash || a.kind != b.kind) return false;
  switch (a.kind) {
    case ExprKind::Constant:
      return a.value == b.value;
    case ExprKind::Variable:
      return a.name == b.name;
    case ExprKind::Function:
      if (a.name != b.name || a.orders != b.orders) return false;
      break;
    case ExprKind::Power:
      if (a.exponent != b.exponent) return false;
      break;
    default:
      break;
  }
  return a.children == b.children;
}

// ---------------------------------------------------------------------------
// Smart constructors

Expr make_sum(std::vector<Expr> terms) {
  std::vector<Expr> flat;
  flat.reserve(terms.size());
  Rational c = 0;
  for (auto& t : terms) {
    if (t.kind() == ExprKind::Sum) {
      for (const auto& u : t.operands()) {
        if (u.is_constant())
          c += u.value();
        else
          flat.push_back(u);
      }
    } else if (t.is_constant()) {
      c += t.value();
    } else {
      flat.push_back(std::move(t));
    }
  }
  if (c != 0) flat.push_back(Expr::constant(c));
  if (flat.empty()) return Expr();
  if (flat.size() == 1) return flat.front();
  auto n = new_node(ExprKind::Sum);
  n->children = std::move(flat);
  finish_hash(*n);
  return Expr(std::shared_ptr<const detail::Node>(n));
}

Expr make_product(std::vector<Expr> factors) {
  std::vector<Expr> flat;
  flat.reserve(factors.size() + 1);
  Rational c = 1;
  for (auto& f : factors) {
    if (f.kind() == ExprKind::Product) {
      for (const auto& u : f.operands()) {
        if (u.is_constant())
          c *= u.value();
        else
          flat.push_back(u);
      }
    } else if (f.is_constant()) {
      c *= f.value();
    } else {
      flat.push_back(std::move(f));
    }
  }
  if (c == 0) return Expr();
  if (flat.empty()) return Expr::constant(c);
  if (c != 1) flat.insert(flat.begin(), Expr::constant(c));
  if (flat.size() == 1) return flat.front();
  auto n = new_node(ExprKind::Product);
  n->children = std::move(flat);
  finish_hash(*n);
  return Expr(std::shared_ptr<const detail::Node>(n));
}

Expr make_power(const Expr& base, int exponent) {
  if (exponent == 0) return Expr(1);
  if (exponent == 1) return base;
  if (base.is_constant() && !(base.value() == 0 && exponent < 0)) {
    const Rational& b = base.value();
    Rational r;
    unsigned long e = static_cast<unsigned long>(exponent < 0 ? -static_cast<long>(exponent) : exponent);
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), b.get_num_mpz_t(), e);
    mpz_pow_ui(den.get_mpz_t(), b.get_den_mpz_t(), e);
    r = exponent < 0 ? Rational(den, num) : Rational(num, den);
    r.canonicalize();
    return Expr::constant(r);
  }
  if (base.kind() == ExprKind::Power) return make_power(base.base(), base.exponent() * exponent);
  auto n = new_node(ExprKind::Power);
  n->children = {base};
  n->exponent = exponent;
  finish_hash(*n);
  return Expr(std::shared_ptr<const detail::Node>(n));
}

Expr make_quotient(const Expr& num, const Expr& den) {
  if (den.is_zero_constant()) throw std::domain_error("quotient with literal zero denominator");
  if (den.is_constant(1)) return num;
  if (num.is_zero_constant()) return Expr();
  if (num.is_constant() && den.is_constant()) return Expr::constant(num.value() / den.value());
  auto n = new_node(ExprKind::Quotient);
  n->children = {num, den};
  finish_hash(*n);
  return Expr(std::shared_ptr<const detail::Node>(n));
}

Expr operator+(const Expr& a, const Expr& b) { return make_sum({a, b}); }
Expr operator-(const Expr& a) { return make_product({Expr(-1), a}); }
Expr operator-(const Expr& a, const Expr& b) { return make_sum({a, -b}); }
Expr operator*(const Expr& a, const Expr& b) { return make_product({a, b}); }
Expr operator/(const Expr& a, const Expr& b) { return make_quotient(a, b); }
Expr pow(const Expr& base, int exponent) { return make_power(base, exponent); }

Expr var(std::string name) { return Expr::variable(std::move(name)); }

// ---------------------------------------------------------------------------
// Differentiation and substitution

namespace {

class Differentiator {
 public:
  explicit Differentiator(const std::string& v) : v_(v) {}

  Expr operator()(const Expr& e) {
    if (auto it = memo_.find(e.node_id()); it != memo_.end()) return it->second;
    Expr d = compute(e);
    memo_.emplace(e.node_id(), d);
    return d;
  }

 private:
  Expr compute(const Expr& e) {
    switch (e.kind()) {
      case ExprKind::Constant:
        return Expr();
      case ExprKind::Variable:
        return e.name() == v_ ? Expr(1) : Expr();
      case ExprKind::Function: {
        std::vector<Expr> terms;
        const auto& args = e.operands();
        for (std::size_t i = 0; i < args.size(); ++i) {
          Expr da = (*this)(args[i]);
          if (da.is_zero_constant()) continue;
          auto orders = e.orders();
          ++orders[i];
          terms.push_back(Expr::function(e.name(), args, orders) * da);
        }
        return make_sum(std::move(terms));
      }
      case ExprKind::Sum: {
        std::vector<Expr> terms;
        for (const auto& t : e.operands()) terms.push_back((*this)(t));
        return make_sum(std::move(terms));
      }
      case ExprKind::Product: {
        const auto& fs = e.operands();
        std::vector<Expr> terms;
        for (std::size_t i = 0; i < fs.size(); ++i) {
          Expr di = (*this)(fs[i]);
          if (di.is_zero_constant()) continue;
          std::vector<Expr> prod;
          prod.reserve(fs.size());
          for (std::size_t j = 0; j < fs.size(); ++j) prod.push_back(i == j ? di : fs[j]);
          terms.push_back(make_product(std::move(prod)));
        }
        return make_sum(std::move(terms));
      }
      case ExprKind::Power: {
        Expr db = (*this)(e.base());
        if (db.is_zero_constant()) return Expr();
        int n = e.exponent();
        return make_product({Expr(n), make_power(e.base(), n - 1), db});
      }
      case ExprKind::Quotient: {
        const Expr& u = e.numerator();
        const Expr& w = e.denominator();
        Expr du = (*this)(u);
        Expr dw = (*this)(w);
        if (dw.is_zero_constant()) return make_quotient(du, w);
        return make_quotient(du * w - u * dw, make_power(w, 2));
      }
    }
    throw std::logic_error("unknown expression kind");
  }

  const std::string& v_;
  std::unordered_map<const detail::Node*, Expr> memo_;
};

class Substituter {
 public:
  explicit Substituter(const std::map<std::string, Expr>& b) : b_(b) {}

  Expr operator()(const Expr& e) {
    if (auto it = memo_.find(e.node_id()); it != memo_.end()) return it->second;
    Expr r = compute(e);
    memo_.emplace(e.node_id(), r);
    return r;
  }

 private:
  Expr compute(const Expr& e) {
    switch (e.kind()) {
      case ExprKind::Constant:
        return e;
      case ExprKind::Variable: {
        auto it = b_.find(e.name());
        return it == b_.end() ? e : it->second;
      }
      case ExprKind::Function: {
        std::vector<Expr> args;
        for (const auto& a : e.operands()) args.push_back((*this)(a));
        return Expr::function(e.name(), std::move(args), e.orders());
      }
      case ExprKind::Sum: {
        std::vector<Expr> ts;
        for (const auto& t : e.operands()) ts.push_back((*this)(t));
        return make_sum(std::move(ts));
      }
      case ExprKind::Product: {
        std::vector<Expr> fs;
        for (const auto& f : e.operands()) fs.push_back((*this)(f));
        return make_product(std::move(fs));
      }
      case ExprKind::Power:
        return make_power((*this)(e.base()), e.exponent());
      case ExprKind::Quotient:
        return make_quotient((*this)(e.numerator()), (*this)(e.denominator()));
    }
    throw std::logic_error("unknown expression kind");
  }

  const std::map<std::string, Expr>& b_;
  std::unordered_map<const detail::Node*, Expr> memo_;
};

template <typename F>
void visit_nodes(const Expr& e, F&& f) {
  std::unordered_map<const detail::Node*, bool> seen;
  std::vector<Expr> stack{e};
  while (!stack.empty()) {
    Expr cur = stack.back();
    stack.pop_back();
    if (!seen.emplace(cur.node_id(), true).second) continue;
    f(cur);
    for (const auto& c : cur.operands()) stack.push_back(c);
  }
}

}  // namespace

Expr diff(const Expr& e, const std::string& v) { return Differentiator(v)(e); }

Expr diff(const Expr& e, const std::string& v, int times) {
  Expr r = e;
  for (int i = 0; i < times; ++i) r = diff(r, v);
  return r;
}

Expr substitute(const Expr& e, const std::map<std::string, Expr>& bindings) {
  if (bindings.empty()) return e;
  return Substituter(bindings)(e);
}

std::set<std::string> free_variables(const Expr& e) {
  std::set<std::string> out;
  visit_nodes(e, [&](const Expr& n) {
    if (n.kind() == ExprKind::Variable) out.insert(n.name());
  });
  return out;
}

std::map<std::string, std::size_t> opaque_functions(const Expr& e) {
  std::map<std::string, std::size_t> out;
  visit_nodes(e, [&](const Expr& n) {
    if (n.kind() != ExprKind::Function) return;
    auto [it, fresh] = out.emplace(n.name(), n.operands().size());
    if (!fresh && it->second != n.operands().size())
      throw std::invalid_argument("function '" + n.name() + "' used with different arities");
  });
  return out;
}

std::size_t node_count(const Expr& e) {
  std::size_t n = 0;
  visit_nodes(e, [&](const Expr&) { ++n; });
  return n;
}

// ---------------------------------------------------------------------------
// Printing. The output parses back to a structurally identical tree.

namespace {

enum class Slot { Term, Factor, PowerBase, QuotientPart };

bool negative_leading(const Expr& e) {
  if (e.is_constant()) return e.value() < 0;
  if (e.kind() == ExprKind::Product) {
    const Expr& f = e.operands().front();
    return f.is_constant() && f.value() < 0;
  }
  return false;
}

void print(std::ostream& os, const Expr& e, Slot slot);

void print_function(std::ostream& os, const Expr& e) {
  const auto& args = e.operands();
  const auto& orders = e.orders();
  if (args.size() == 1) {
    os << e.name() << std::string(static_cast<std::size_t>(orders[0]), '\'') << '(';
    print(os, args[0], Slot::Term);
    os << ')';
    return;
  }
  bool plain = true;
  for (int o : orders) plain = plain && o == 0;
  if (plain) {
    os << e.name();
  } else {
    os << "D[" << e.name();
    for (int o : orders) os << ',' << o;
    os << ']';
  }
  os << '(';
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) os << ", ";
    print(os, args[i], Slot::Term);
  }
  os << ')';
}

void print_product(std::ostream& os, const Expr& e) {
  const auto& fs = e.operands();
  std::size_t start = 0;
  if (fs.front().is_constant()) {
    const Rational& c = fs.front().value();
    if (c == -1)
      os << '-';
    else
      os << c.get_str() << '*';
    start = 1;
  }
  for (std::size_t i = start; i < fs.size(); ++i) {
    if (i > start) os << '*';
    print(os, fs[i], Slot::Factor);
  }
}

void print(std::ostream& os, const Expr& e, Slot slot) {
  switch (e.kind()) {
    case ExprKind::Constant: {
      const Rational& v = e.value();
      bool simple = v >= 0 && v.get_den() == 1;
      bool wrap = !simple && (slot == Slot::PowerBase || slot == Slot::QuotientPart);
      if (wrap) os << '(';
      os << v.get_str();
      if (wrap) os << ')';
      return;
    }
    case ExprKind::Variable:
      os << e.name();
      return;
    case ExprKind::Function:
      print_function(os, e);
      return;
    case ExprKind::Sum: {
      bool wrap = slot != Slot::Term;
      if (wrap) os << '(';
      const auto& ts = e.operands();
      for (std::size_t i = 0; i < ts.size(); ++i) {
        std::ostringstream t;
        print(t, ts[i], Slot::Term);
        std::string s = t.str();
        if (i == 0)
          os << s;
        else if (negative_leading(ts[i]))
          os << " - " << s.substr(1);
        else
          os << " + " << s;
      }
      if (wrap) os << ')';
      return;
    }
    case ExprKind::Product: {
      bool wrap = slot != Slot::Term;
      if (wrap) os << '(';
      print_product(os, e);
      if (wrap) os << ')';
      return;
    }
    case ExprKind::Power: {
      bool wrap = slot == Slot::PowerBase;
      if (wrap) os << '(';
      print(os, e.base(), Slot::PowerBase);
      if (e.exponent() < 0)
        os << "^(" << e.exponent() << ')';
      else
        os << '^' << e.exponent();
      if (wrap) os << ')';
      return;
    }
    case ExprKind::Quotient: {
      bool wrap = slot == Slot::PowerBase || slot == Slot::QuotientPart;
      if (wrap) os << '(';
      print(os, e.numerator(), Slot::QuotientPart);
      os << '/';
      print(os, e.denominator(), Slot::QuotientPart);
      if (wrap) os << ')';
      return;
    }
  }
}

}  // namespace

std::string to_string(const Expr& e) {
  std::ostringstream os;
  print(os, e, Slot::Term);
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Expr& e) { return os << to_string(e); }

}  // namespace paracr
