#include "paracr/identity.hpp"

#include <random>
#include <unordered_map>

#include "paracr/rational_function.hpp"

namespace paracr {

Rational FunctionInstance::evaluate(const std::vector<Rational>& args, const std::vector<int>& orders) const {
  if (args.size() != arity || orders.size() != arity)
    throw std::invalid_argument("function instance called with wrong arity");
  std::vector<std::vector<Rational>> powers(arity);
  for (std::size_t i = 0; i < arity; ++i) {
    powers[i].reserve(static_cast<std::size_t>(degree) + 1);
    powers[i].push_back(Rational(1));
    for (int k = 1; k <= degree; ++k) powers[i].push_back(powers[i].back() * args[i]);
  }
  Rational sum = 0;
  for (const auto& [exps, c] : terms) {
    Rational t = c;
    bool vanishes = false;
    for (std::size_t i = 0; i < arity && !vanishes; ++i) {
      int e = exps[i], o = orders[i];
      if (e < o) {
        vanishes = true;
        break;
      }
      for (int k = 0; k < o; ++k) t *= (e - k);
      t *= powers[i][static_cast<std::size_t>(e - o)];
    }
    if (!vanishes) sum += t;
  }
  return sum;
}

namespace {

class Evaluator {
 public:
  explicit Evaluator(const Point& pt) : pt_(pt) {}

  Rational operator()(const Expr& e) {
    if (auto it = memo_.find(e.node_id()); it != memo_.end()) return it->second;
    Rational v = compute(e);
    memo_.emplace(e.node_id(), v);
    return v;
  }

 private:
  Rational compute(const Expr& e) {
    switch (e.kind()) {
      case ExprKind::Constant:
        return e.value();
      case ExprKind::Variable: {
        auto it = pt_.coords.find(e.name());
        if (it == pt_.coords.end()) throw UnboundSymbol(e.name());
        return it->second;
      }
      case ExprKind::Function: {
        auto it = pt_.functions.find(e.name());
        if (it == pt_.functions.end()) throw UnboundSymbol(e.name());
        std::vector<Rational> args;
        for (const auto& a : e.operands()) args.push_back((*this)(a));
        return it->second.evaluate(args, e.orders());
      }
      case ExprKind::Sum: {
        Rational s = 0;
        for (const auto& t : e.operands()) s += (*this)(t);
        return s;
      }
      case ExprKind::Product: {
        Rational s = 1;
        for (const auto& f : e.operands()) {
          s *= (*this)(f);
          if (s == 0) break;
        }
        return s;
      }
      case ExprKind::Power: {
        Rational b = (*this)(e.base());
        int n = e.exponent();
        if (n < 0) {
          if (b == 0) throw DivisionByZero();
          b = 1 / b;
          n = -n;
        }
        Rational r = 1;
        for (int k = 0; k < n; ++k) r *= b;
        return r;
      }
      case ExprKind::Quotient: {
        Rational d = (*this)(e.denominator());
        if (d == 0) throw DivisionByZero();
        return (*this)(e.numerator()) / d;
      }
    }
    throw std::logic_error("unknown expression kind");
  }

  const Point& pt_;
  std::unordered_map<const detail::Node*, Rational> memo_;
};

Rational random_rational(std::mt19937_64& rng, long range) {
  std::uniform_int_distribution<long> num(-range, range);
  std::uniform_int_distribution<long> den(1, range);
  Rational r{mpz_class(num(rng)), mpz_class(den(rng))};
  r.canonicalize();
  return r;
}

long random_coefficient(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> mag(1, 20);
  std::bernoulli_distribution neg(0.5);
  long v = mag(rng);
  return neg(rng) ? -v : v;
}

void all_exponents(std::size_t arity, int max_total, std::vector<int>& cur, std::size_t i,
                   std::vector<std::vector<int>>& out) {
  if (i == arity) {
    out.push_back(cur);
    return;
  }
  int used = 0;
  for (std::size_t k = 0; k < i; ++k) used += cur[k];
  for (int e = 0; used + e <= max_total; ++e) {
    cur[i] = e;
    all_exponents(arity, max_total, cur, i + 1, out);
  }
  cur[i] = 0;
}

// Dense in every argument up to the instance degree, dense in mixed
// monomials up to total degree 4.
FunctionInstance random_instance(std::mt19937_64& rng, std::size_t arity, int degree) {
  FunctionInstance f;
  f.arity = arity;
  f.degree = degree;
  std::vector<std::vector<int>> exps;
  std::vector<int> cur(arity, 0);
  all_exponents(arity, arity == 1 ? degree : std::min(degree, 4), cur, 0, exps);
  for (std::size_t i = 0; i < arity && arity > 1; ++i) {
    for (int e = 5; e <= degree; ++e) {
      std::vector<int> v(arity, 0);
      v[i] = e;
      exps.push_back(v);
    }
  }
  for (const auto& e : exps) f.terms[e] = Rational(random_coefficient(rng));
  return f;
}

}  // namespace

Rational eval(const Expr& e, const Point& pt) { return Evaluator(pt)(e); }

const char* to_string(ZeroStatus s) {
  switch (s) {
    case ZeroStatus::StructurallyZero:
      return "structurally_zero";
    case ZeroStatus::ProbabilisticallyZero:
      return "probabilistically_zero";
    case ZeroStatus::Nonzero:
      return "nonzero";
  }
  return "?";
}

ZeroStatus zero_status_from_string(const std::string& s) {
  if (s == "structurally_zero") return ZeroStatus::StructurallyZero;
  if (s == "probabilistically_zero") return ZeroStatus::ProbabilisticallyZero;
  if (s == "nonzero") return ZeroStatus::Nonzero;
  throw std::invalid_argument("unknown verdict status '" + s + "'");
}

Point sample_point(const Expr& e, const SampleConfig& cfg, std::size_t index, std::size_t attempt) {
  std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(attempt)};
  std::mt19937_64 rng(seq);
  Point pt;
  for (const auto& v : free_variables(e)) pt.coords[v] = random_rational(rng, cfg.range);
  for (const auto& [name, arity] : opaque_functions(e))
    pt.functions[name] = random_instance(rng, arity, cfg.instance_degree);
  return pt;
}

ZeroVerdict is_zero(const Expr& e, const SampleConfig& cfg) {
  if (cfg.samples < 1) throw std::invalid_argument("is_zero needs at least one sample");
  ZeroVerdict v;
  v.seed = cfg.seed;
  bool structural = false;
  try {
    structural = is_structurally_zero(e);
  } catch (const std::domain_error&) {
    // a denominator that is identically zero; sampling will report it
  }
  if (structural && cfg.structural_shortcut) {
    v.status = ZeroStatus::StructurallyZero;
    return v;
  }
  const std::size_t budget = 100 * cfg.samples;
  std::size_t attempts = 0;
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    for (std::size_t attempt = 0;; ++attempt) {
      if (attempts++ >= budget) throw SamplingExhausted(budget);
      Point pt = sample_point(e, cfg, i, attempt);
      Rational value;
      try {
        value = eval(e, pt);
      } catch (const DivisionByZero&) {
        continue;
      }
      if (value != 0) {
        v.status = ZeroStatus::Nonzero;
        v.samples = i + 1;
        v.witness = std::move(pt);
        v.value = value;
        return v;
      }
      break;
    }
  }
  v.samples = cfg.samples;
  v.status = structural ? ZeroStatus::StructurallyZero : ZeroStatus::ProbabilisticallyZero;
  return v;
}

ZeroVerdict combine(const std::vector<ZeroVerdict>& verdicts) {
  ZeroVerdict out;
  for (const auto& v : verdicts) {
    if (v.status == ZeroStatus::Nonzero) return v;
    if (v.status == ZeroStatus::ProbabilisticallyZero && out.status == ZeroStatus::StructurallyZero) out = v;
    out.samples = std::max(out.samples, v.samples);
    out.seed = v.seed;
  }
  return out;
}

}  // namespace paracr
