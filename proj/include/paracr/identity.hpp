#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "paracr/expr.hpp"

namespace paracr {

class UnboundSymbol : public std::runtime_error {
 public:
  explicit UnboundSymbol(const std::string& name)
      : std::runtime_error("unbound symbol '" + name + "'"), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class DivisionByZero : public std::runtime_error {
 public:
  DivisionByZero() : std::runtime_error("division by zero at evaluation point") {}
};

class SamplingExhausted : public std::runtime_error {
 public:
  explicit SamplingExhausted(std::size_t attempts)
      : std::runtime_error("no regular sample point after " + std::to_string(attempts) + " attempts") {}
};

// Concrete polynomial standing in for an opaque function. Terms map an
// exponent vector (one entry per argument) to a coefficient.
struct FunctionInstance {
  std::size_t arity = 1;
  int degree = 0;
  std::map<std::vector<int>, Rational> terms;

  // Value of the partial derivative with the given orders at args.
  Rational evaluate(const std::vector<Rational>& args, const std::vector<int>& orders) const;
};

struct Point {
  std::map<std::string, Rational> coords;
  std::map<std::string, FunctionInstance> functions;
};

Rational eval(const Expr& e, const Point& pt);

struct SampleConfig {
  std::size_t samples = 32;
  std::uint64_t seed = 0x5eed;
  int instance_degree = 8;
  long range = 10000;
  // When false, sampling runs even if simplify already proves zero.
  bool structural_shortcut = true;
};

enum class ZeroStatus { StructurallyZero, ProbabilisticallyZero, Nonzero };

struct ZeroVerdict {
  ZeroStatus status = ZeroStatus::StructurallyZero;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::optional<Point> witness;
  std::optional<Rational> value;

  bool zero() const { return status != ZeroStatus::Nonzero; }
};

const char* to_string(ZeroStatus s);
ZeroStatus zero_status_from_string(const std::string& s);

// Random point for e drawn deterministically from (seed, index, attempt).
Point sample_point(const Expr& e, const SampleConfig& cfg, std::size_t index, std::size_t attempt);

ZeroVerdict is_zero(const Expr& e, const SampleConfig& cfg = {});

// Collapses several verdicts: nonzero wins (first witness kept), then
// probabilistic, then structural.
ZeroVerdict combine(const std::vector<ZeroVerdict>& verdicts);

}  // namespace paracr
