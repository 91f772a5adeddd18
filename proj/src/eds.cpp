#include "paracr/eds.hpp"

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "paracr/parse.hpp"

namespace paracr::eds {

namespace {

std::string atom_name(AtomId id) { return atom_key(id).substr(2); }

}  // namespace

Coefficient coefficient(const std::string& name) { return Polynomial::atom(intern_variable(name)); }

Coefficient constant(const Rational& c) { return Polynomial(c); }

Coefficient parse_coefficient(const std::string& text) {
  RationalFunction rf = RationalFunction::from_expr(parse(text));
  if (!rf.denominator().empty() || rf.numerator().has_negative_exponent())
    throw ParseError("coefficient '" + text + "' is not a polynomial", 0);
  for (AtomId id : rf.numerator().atoms())
    if (atom_key(id).rfind("v:", 0) != 0) throw ParseError("coefficient '" + text + "' uses a function", 0);
  return rf.numerator();
}

std::string to_string(const Coefficient& c) { return to_string(RationalFunction(c).to_expr()); }

std::set<std::string> coefficient_names(const Coefficient& c) {
  std::set<std::string> out;
  for (AtomId id : c.atoms()) out.insert(atom_name(id));
  return out;
}

Coefficient partial(const Coefficient& c, const std::string& name) {
  AtomId id = intern_variable(name);
  Polynomial out;
  for (const auto& [m, k] : c.terms()) {
    auto it = std::find_if(m.begin(), m.end(), [&](const auto& p) { return p.first == id; });
    if (it == m.end()) continue;
    Monomial dm = m;
    auto& e = dm[static_cast<std::size_t>(it - m.begin())];
    Rational coef = k * e.second;
    if (--e.second == 0) dm.erase(dm.begin() + (it - m.begin()));
    out.add_term(dm, coef);
  }
  return out;
}

Coefficient zero_names(const Coefficient& c, const std::set<std::string>& names) {
  if (names.empty()) return c;
  Polynomial out;
  for (const auto& [m, k] : c.terms()) {
    bool hit = std::any_of(m.begin(), m.end(), [&](const auto& p) { return names.count(atom_name(p.first)) > 0; });
    if (!hit) out.add_term(m, k);
  }
  return out;
}

FormalForm::FormalForm(int degree, SymbolTablePtr symbols) : degree_(degree), symbols_(std::move(symbols)) {
  if (degree < 0) throw std::invalid_argument("negative form degree");
}

Coefficient FormalForm::coefficient(const Key& key) const {
  auto it = terms_.find(key);
  return it == terms_.end() ? Coefficient() : it->second;
}

void FormalForm::add(const Key& key, const Coefficient& c) {
  if (c.is_zero()) return;
  const auto& table = *symbols_;
  int deg = 0;
  for (int s : key) {
    if (s < 0 || static_cast<std::size_t>(s) >= table.size()) throw std::out_of_range("symbol index out of range");
    deg += table[static_cast<std::size_t>(s)].degree;
  }
  if (deg != degree_) throw std::invalid_argument("term degree does not match form degree");
  Key k = key;
  int sign = 1;
  // insertion sort; swapping odd symbols flips the sign
  for (std::size_t i = 1; i < k.size(); ++i) {
    for (std::size_t j = i; j > 0 && k[j - 1] > k[j]; --j) {
      int da = table[static_cast<std::size_t>(k[j - 1])].degree, db = table[static_cast<std::size_t>(k[j])].degree;
      if (da % 2 && db % 2) sign = -sign;
      std::swap(k[j - 1], k[j]);
    }
  }
  for (std::size_t i = 1; i < k.size(); ++i)
    if (k[i] == k[i - 1] && table[static_cast<std::size_t>(k[i])].degree % 2) return;
  Coefficient add = sign > 0 ? c : -c;
  auto it = terms_.find(k);
  if (it == terms_.end()) {
    terms_.emplace(std::move(k), std::move(add));
  } else {
    it->second = it->second + add;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void FormalForm::require_compatible(const FormalForm& o) const {
  if (degree_ != o.degree_) throw std::invalid_argument("adding forms of different degree");
  if (symbols_ != o.symbols_ && *symbols_ != *o.symbols_)
    throw std::invalid_argument("forms belong to different systems");
}

FormalForm FormalForm::operator+(const FormalForm& o) const {
  require_compatible(o);
  FormalForm out = *this;
  for (const auto& [k, c] : o.terms_) out.add(k, c);
  return out;
}

FormalForm FormalForm::operator-(const FormalForm& o) const { return *this + (-o); }

FormalForm FormalForm::operator-() const {
  FormalForm out(degree_, symbols_);
  for (const auto& [k, c] : terms_) out.terms_.emplace(k, -c);
  return out;
}

FormalForm FormalForm::operator*(const Coefficient& c) const {
  FormalForm out(degree_, symbols_);
  for (const auto& [k, v] : terms_) out.add(k, v * c);
  return out;
}

bool FormalForm::operator==(const FormalForm& o) const {
  return degree_ == o.degree_ && (symbols_ == o.symbols_ || *symbols_ == *o.symbols_) && terms_ == o.terms_;
}

FormalForm wedge(const FormalForm& a, const FormalForm& b) {
  if (a.symbols() != b.symbols() && *a.symbols() != *b.symbols())
    throw std::invalid_argument("forms belong to different systems");
  FormalForm out(a.degree() + b.degree(), a.symbols());
  for (const auto& [ka, ca] : a.terms()) {
    for (const auto& [kb, cb] : b.terms()) {
      FormalForm::Key k = ka;
      k.insert(k.end(), kb.begin(), kb.end());
      out.add(k, ca * cb);
    }
  }
  return out;
}

std::string to_string(const FormalForm& a) {
  if (a.is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [k, c] : a.terms()) {
    if (!first) out << " + ";
    first = false;
    out << '(' << to_string(c) << ')';
    for (int s : k) out << (&s == &k.front() ? " " : "^") << (*a.symbols())[static_cast<std::size_t>(s)].name;
  }
  return out.str();
}

FormalSystem::FormalSystem(std::vector<std::string> generators, std::vector<std::string> coefficients)
    : generators_(std::move(generators)), coefficients_(std::move(coefficients)) {
  auto table = std::make_shared<SymbolTable>();
  auto declare = [&](const std::string& name, int degree, bool atom) {
    if (!index_.emplace(name, static_cast<int>(table->size())).second)
      throw std::invalid_argument("duplicate name '" + name + "'");
    table->push_back({name, degree, atom});
  };
  for (const auto& g : generators_) declare(g, 1, false);
  for (const auto& g : generators_) declare("d" + g, 2, true);
  for (const auto& c : coefficients_) declare("d" + c, 1, true);
  for (const auto& c : coefficients_)
    if (index_.count(c)) throw std::invalid_argument("coefficient '" + c + "' clashes with a generator");
  coefficient_set_.insert(coefficients_.begin(), coefficients_.end());
  symbols_ = std::move(table);
}

bool FormalSystem::has_generator(const std::string& name) const {
  return std::find(generators_.begin(), generators_.end(), name) != generators_.end();
}

bool FormalSystem::has_coefficient(const std::string& name) const { return coefficient_set_.count(name) > 0; }

int FormalSystem::symbol_index(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw UndeclaredName("undeclared symbol '" + name + "'");
  return it->second;
}

FormalForm FormalSystem::generator(const std::string& name) const {
  if (!has_generator(name)) throw UndeclaredName("undeclared generator '" + name + "'");
  FormalForm f(1, symbols_);
  f.add({symbol_index(name)}, constant(1));
  return f;
}

FormalForm FormalSystem::scalar(const Coefficient& c) const {
  for (const auto& n : coefficient_names(c))
    if (!has_coefficient(n)) throw UndeclaredName("undeclared coefficient '" + n + "'");
  FormalForm f(0, symbols_);
  f.add({}, c);
  return f;
}

void FormalSystem::check_form(const FormalForm& f, int degree) const {
  if (f.degree() != degree) throw std::invalid_argument("equation has the wrong degree");
  if (f.symbols() != symbols_ && *f.symbols() != *symbols_)
    throw std::invalid_argument("equation belongs to a different system");
  for (const auto& [k, c] : f.terms()) {
    for (int s : k)
      if ((*symbols_)[static_cast<std::size_t>(s)].atom)
        throw UndeclaredName("equations may only use generators, not '" + (*symbols_)[static_cast<std::size_t>(s)].name + "'");
    for (const auto& n : coefficient_names(c))
      if (!has_coefficient(n)) throw UndeclaredName("undeclared coefficient '" + n + "'");
  }
}

void FormalSystem::set_structure(const std::string& generator, FormalForm d) {
  if (!has_generator(generator)) throw UndeclaredName("undeclared generator '" + generator + "'");
  check_form(d, 2);
  structure_.insert_or_assign(generator, std::move(d));
}

void FormalSystem::set_differential(const std::string& coefficient, FormalForm d) {
  if (!has_coefficient(coefficient)) throw UndeclaredName("undeclared coefficient '" + coefficient + "'");
  check_form(d, 1);
  differential_.insert_or_assign(coefficient, std::move(d));
}

const FormalForm* FormalSystem::structure(const std::string& generator) const {
  auto it = structure_.find(generator);
  return it == structure_.end() ? nullptr : &it->second;
}

const FormalForm* FormalSystem::differential(const std::string& coefficient) const {
  auto it = differential_.find(coefficient);
  return it == differential_.end() ? nullptr : &it->second;
}

bool FormalSystem::operator==(const FormalSystem& o) const {
  return generators_ == o.generators_ && coefficients_ == o.coefficients_ && structure_ == o.structure_ &&
         differential_ == o.differential_;
}

namespace {

FormalForm atom_form(const FormalSystem& sys, const std::string& name) {
  const auto& table = *sys.symbols();
  int i = sys.symbol_index("d" + name);
  FormalForm f(table[static_cast<std::size_t>(i)].degree, sys.symbols());
  f.add({i}, constant(1));
  return f;
}

FormalForm d_coefficient(const Coefficient& c, const FormalSystem& sys) {
  FormalForm out = sys.zero(1);
  for (const auto& n : coefficient_names(c)) {
    if (!sys.has_coefficient(n)) throw UndeclaredName("undeclared coefficient '" + n + "'");
    const FormalForm* d = sys.differential(n);
    out = out + (d ? *d : atom_form(sys, n)) * partial(c, n);
  }
  return out;
}

FormalForm d_symbol(int s, const FormalSystem& sys) {
  const Symbol& sym = (*sys.symbols())[static_cast<std::size_t>(s)];
  if (sym.atom) return sys.zero(sym.degree + 1);
  const FormalForm* d = sys.structure(sym.name);
  return d ? *d : atom_form(sys, sym.name);
}

FormalForm key_form(const FormalForm::Key& k, const Coefficient& c, int degree, const SymbolTablePtr& table) {
  FormalForm f(degree, table);
  f.add(k, c);
  return f;
}

}  // namespace

FormalForm formal_d(const FormalForm& a, const FormalSystem& sys) {
  if (a.symbols() != sys.symbols() && *a.symbols() != *sys.symbols())
    throw UndeclaredName("form does not belong to the system");
  const auto& table = *sys.symbols();
  FormalForm out(a.degree() + 1, sys.symbols());
  for (const auto& [k, c] : a.terms()) {
    out = out + wedge(d_coefficient(c, sys), key_form(k, constant(1), a.degree(), sys.symbols()));
    int before = 0;
    for (std::size_t i = 0; i < k.size(); ++i) {
      const int deg_i = table[static_cast<std::size_t>(k[i])].degree;
      FormalForm ds = d_symbol(k[i], sys);
      if (!ds.is_zero()) {
        FormalForm::Key head(k.begin(), k.begin() + static_cast<long>(i));
        FormalForm::Key tail(k.begin() + static_cast<long>(i) + 1, k.end());
        int head_deg = before, tail_deg = a.degree() - before - deg_i;
        FormalForm term = wedge(wedge(key_form(head, before % 2 ? -c : c, head_deg, sys.symbols()), ds),
                                key_form(tail, constant(1), tail_deg, sys.symbols()));
        out = out + term;
      }
      before += deg_i;
    }
  }
  return out;
}

const char* to_string(ResidualClass c) {
  switch (c) {
    case ResidualClass::IdenticallyZero:
      return "identically_zero";
    case ResidualClass::ZeroModuloAtoms:
      return "zero_modulo_unspecified";
    case ResidualClass::Nonzero:
      return "nonzero";
  }
  return "?";
}

FormalForm atom_free_part(const FormalForm& r) {
  FormalForm out(r.degree(), r.symbols());
  const auto& table = *r.symbols();
  for (const auto& [k, c] : r.terms()) {
    bool atom = std::any_of(k.begin(), k.end(), [&](int s) { return table[static_cast<std::size_t>(s)].atom; });
    if (!atom) out.add(k, c);
  }
  return out;
}

ResidualClass classify(const FormalForm& r) {
  if (r.is_zero()) return ResidualClass::IdenticallyZero;
  return atom_free_part(r).is_zero() ? ResidualClass::ZeroModuloAtoms : ResidualClass::Nonzero;
}

std::vector<Residual> d_squared_residuals(const FormalSystem& sys) {
  std::vector<Residual> out;
  auto push = [&](const std::string& name, const FormalForm& eq) {
    FormalForm r = formal_d(eq, sys);
    out.push_back({name, r, classify(r), atom_free_part(r)});
  };
  for (const auto& g : sys.generators())
    if (const FormalForm* d = sys.structure(g)) push(g, *d);
  for (const auto& c : sys.coefficients())
    if (const FormalForm* d = sys.differential(c)) push(c, *d);
  return out;
}

ConnectionMatrix connection_curvature(const ConnectionMatrix& w, const FormalSystem& sys) {
  const std::size_t n = w.size();
  for (const auto& row : w) {
    if (row.size() != n) throw DimensionMismatch("connection matrix is not square");
    for (const auto& e : row)
      if (e.degree() != 1) throw DimensionMismatch("connection entries must be 1-forms");
  }
  ConnectionMatrix k;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<FormalForm> row;
    for (std::size_t j = 0; j < n; ++j) {
      FormalForm e = formal_d(w[i][j], sys);
      for (std::size_t m = 0; m < n; ++m) e = e + wedge(w[i][m], w[m][j]);
      row.push_back(std::move(e));
    }
    k.push_back(std::move(row));
  }
  return k;
}

FormalForm specialize(const FormalForm& a, const std::set<std::string>& zeroed) {
  FormalForm out(a.degree(), a.symbols());
  const auto& table = *a.symbols();
  for (const auto& [k, c] : a.terms()) {
    bool dead = std::any_of(k.begin(), k.end(), [&](int s) {
      const Symbol& sym = table[static_cast<std::size_t>(s)];
      return sym.atom && sym.degree == 1 && zeroed.count(sym.name.substr(1)) > 0;
    });
    if (!dead) out.add(k, zero_names(c, zeroed));
  }
  return out;
}

FormalSystem flat_specialize(const FormalSystem& sys, const std::set<std::string>& zeroed) {
  for (const auto& n : zeroed)
    if (!sys.has_coefficient(n)) throw UndeclaredName("undeclared coefficient '" + n + "'");
  FormalSystem out = sys;
  for (const auto& [g, d] : sys.structures()) out.set_structure(g, specialize(d, zeroed));
  for (const auto& [c, d] : sys.differentials()) out.set_differential(c, specialize(d, zeroed));
  for (const auto& n : zeroed) out.set_differential(n, sys.zero(1));
  return out;
}

FormalForm rebase(const FormalForm& a, const FormalSystem& target) {
  FormalForm out(a.degree(), target.symbols());
  for (const auto& [k, c] : a.terms()) {
    FormalForm::Key nk;
    for (int s : k) nk.push_back(target.symbol_index((*a.symbols())[static_cast<std::size_t>(s)].name));
    for (const auto& n : coefficient_names(c))
      if (!target.has_coefficient(n)) throw UndeclaredName("undeclared coefficient '" + n + "'");
    out.add(nk, c);
  }
  return out;
}

std::set<std::string> coefficient_family(const FormalSystem& sys, const std::vector<std::string>& roots) {
  std::set<std::string> out;
  for (const auto& c : sys.coefficients())
    for (const auto& r : roots)
      if (c == r || c.rfind(r + "_", 0) == 0) out.insert(c);
  return out;
}

namespace {

using nlohmann::json;

std::vector<std::string> string_list(const json& j, const char* what) {
  if (!j.is_array()) throw FixtureError(std::string(what) + " must be an array of names");
  std::vector<std::string> out;
  for (const auto& e : j) out.push_back(e.get<std::string>());
  return out;
}

// [[coefficient, symbol, ...], ...]
FormalForm read_form(const json& j, int degree, const FormalSystem& sys) {
  if (!j.is_array()) throw FixtureError("a form must be an array of terms");
  FormalForm f = sys.zero(degree);
  for (const auto& term : j) {
    if (!term.is_array() || term.size() != static_cast<std::size_t>(degree) + 1)
      throw FixtureError("term " + term.dump() + " does not have " + std::to_string(degree) + " generators");
    Coefficient c = parse_coefficient(term[0].get<std::string>());
    FormalForm::Key k;
    for (std::size_t i = 1; i < term.size(); ++i) {
      auto name = term[i].get<std::string>();
      if (!sys.has_generator(name)) throw FixtureError("undeclared generator '" + name + "'");
      k.push_back(sys.symbol_index(name));
    }
    f.add(k, c);
  }
  return f;
}

void read_equations(const json& j, FormalSystem& sys) {
  if (j.contains("structure"))
    for (const auto& [g, eq] : j.at("structure").items()) sys.set_structure(g, read_form(eq, 2, sys));
  if (j.contains("differentials"))
    for (const auto& [c, eq] : j.at("differentials").items()) sys.set_differential(c, read_form(eq, 1, sys));
}

}  // namespace

Fixture parse_fixture(const std::string& json_text) {
  try {
    json j = json::parse(json_text);
    if (j.value("schema", "") != "paracr-eds/1") throw FixtureError("unsupported fixture schema");
    FormalSystem sys(string_list(j.at("generators"), "generators"), string_list(j.value("coefficients", json::array()), "coefficients"));
    read_equations(j, sys);
    Fixture fx{j.value("name", ""), j.value("description", ""), sys, std::nullopt, {}, {}};
    if (j.contains("connection")) {
      ConnectionMatrix w;
      for (const auto& row : j.at("connection")) {
        std::vector<FormalForm> r;
        for (const auto& e : row) r.push_back(read_form(e, 1, sys));
        w.push_back(std::move(r));
      }
      fx.connection = std::move(w);
    }
    if (j.contains("variants")) {
      for (const auto& [name, v] : j.at("variants").items()) {
        FormalSystem alt = sys;
        read_equations(v, alt);
        fx.variants.emplace(name, std::move(alt));
        fx.variant_notes.emplace(name, v.value("note", ""));
      }
    }
    return fx;
  } catch (const json::exception& e) {
    throw FixtureError(std::string("malformed fixture: ") + e.what());
  } catch (const ParseError& e) {
    throw FixtureError(std::string("bad coefficient: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw FixtureError(e.what());
  }
}

Fixture load_fixture(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FixtureError("cannot open fixture '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_fixture(buf.str());
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace paracr::eds
