#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "paracr/rational_function.hpp"

namespace paracr::eds {

// Polynomial in named scalar coefficients with rational constants.
using Coefficient = Polynomial;

Coefficient coefficient(const std::string& name);
Coefficient constant(const Rational& c);
// Parses "1/8*(2*I3_4 + I3_52)"; throws ParseError for non-polynomials.
Coefficient parse_coefficient(const std::string& text);
std::string to_string(const Coefficient& c);
// Names of the scalars c depends on.
std::set<std::string> coefficient_names(const Coefficient& c);
Coefficient partial(const Coefficient& c, const std::string& name);
Coefficient zero_names(const Coefficient& c, const std::set<std::string>& names);

// Graded symbols of a system: generators (degree 1) followed by the inert
// atoms d<gen> (degree 2) and d<coef> (degree 1) that stand for
// unspecified differentials.
struct Symbol {
  std::string name;
  int degree = 1;
  bool atom = false;
  bool operator==(const Symbol&) const = default;
};

using SymbolTable = std::vector<Symbol>;
using SymbolTablePtr = std::shared_ptr<const SymbolTable>;

class UndeclaredName : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Sum of coefficient * (wedge of symbols). Keys are sorted symbol indices;
// odd symbols occur at most once.
class FormalForm {
 public:
  using Key = std::vector<int>;

  FormalForm(int degree, SymbolTablePtr symbols);

  int degree() const { return degree_; }
  const SymbolTablePtr& symbols() const { return symbols_; }
  const std::map<Key, Coefficient>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Coefficient coefficient(const Key& key) const;

  // Adds c * s_{key[0]} ^ ... in the given (unsorted) order.
  void add(const Key& key, const Coefficient& c);

  FormalForm operator+(const FormalForm& o) const;
  FormalForm operator-(const FormalForm& o) const;
  FormalForm operator-() const;
  FormalForm operator*(const Coefficient& c) const;
  bool operator==(const FormalForm& o) const;
  bool operator!=(const FormalForm& o) const { return !(*this == o); }

 private:
  void require_compatible(const FormalForm& o) const;

  int degree_;
  SymbolTablePtr symbols_;
  std::map<Key, Coefficient> terms_;
};

FormalForm wedge(const FormalForm& a, const FormalForm& b);
std::string to_string(const FormalForm& a);

class FormalSystem {
 public:
  FormalSystem(std::vector<std::string> generators, std::vector<std::string> coefficients);

  const std::vector<std::string>& generators() const { return generators_; }
  const std::vector<std::string>& coefficients() const { return coefficients_; }
  const SymbolTablePtr& symbols() const { return symbols_; }

  bool has_generator(const std::string& name) const;
  bool has_coefficient(const std::string& name) const;
  int symbol_index(const std::string& name) const;

  FormalForm zero(int degree) const { return FormalForm(degree, symbols_); }
  FormalForm generator(const std::string& name) const;
  FormalForm scalar(const Coefficient& c) const;

  // Throws UndeclaredName if the form uses atoms or undeclared coefficients.
  void set_structure(const std::string& generator, FormalForm d);
  void set_differential(const std::string& coefficient, FormalForm d);
  const FormalForm* structure(const std::string& generator) const;
  const FormalForm* differential(const std::string& coefficient) const;
  const std::map<std::string, FormalForm>& structures() const { return structure_; }
  const std::map<std::string, FormalForm>& differentials() const { return differential_; }

  bool operator==(const FormalSystem& o) const;

 private:
  void check_form(const FormalForm& f, int degree) const;

  std::vector<std::string> generators_, coefficients_;
  SymbolTablePtr symbols_;
  std::set<std::string> coefficient_set_;
  std::map<std::string, int> index_;
  std::map<std::string, FormalForm> structure_, differential_;
};

// Graded Leibniz expansion; unspecified differentials become atoms.
FormalForm formal_d(const FormalForm& a, const FormalSystem& sys);

enum class ResidualClass { IdenticallyZero, ZeroModuloAtoms, Nonzero };
const char* to_string(ResidualClass c);

struct Residual {
  // Generator or coefficient name whose d^2 was taken.
  std::string name;
  FormalForm value;
  ResidualClass classification;
  // Terms free of atoms; nonempty exactly when classification is Nonzero.
  FormalForm atom_free;
};

ResidualClass classify(const FormalForm& r);
FormalForm atom_free_part(const FormalForm& r);

// d applied to every structure equation, then to every specified
// coefficient differential, in declaration order.
std::vector<Residual> d_squared_residuals(const FormalSystem& sys);

using ConnectionMatrix = std::vector<std::vector<FormalForm>>;

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

ConnectionMatrix connection_curvature(const ConnectionMatrix& w, const FormalSystem& sys);

// Sets the named coefficients to zero everywhere and their differentials
// to zero; the atoms d<name> of zeroed names vanish as well.
FormalSystem flat_specialize(const FormalSystem& sys, const std::set<std::string>& zeroed);
FormalForm specialize(const FormalForm& a, const std::set<std::string>& zeroed);

// The same form over another system's symbols, matched by name.
FormalForm rebase(const FormalForm& a, const FormalSystem& target);

// Every declared coefficient equal to one of the roots or starting with
// "<root>_".
std::set<std::string> coefficient_family(const FormalSystem& sys, const std::vector<std::string>& roots);

struct Fixture {
  std::string name;
  std::string description;
  FormalSystem system;
  std::optional<ConnectionMatrix> connection;
  // Alternative systems, each the base with some equations replaced.
  std::map<std::string, FormalSystem> variants;
  std::map<std::string, std::string> variant_notes;
};

class FixtureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Schema "paracr-eds/1".
Fixture load_fixture(const std::string& path);
Fixture parse_fixture(const std::string& json_text);

// 64-bit FNV-1a over the file bytes.
std::uint64_t fnv1a(const std::string& bytes);

}  // namespace paracr::eds
