#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "paracr/invariants.hpp"
#include "paracr/monge.hpp"
#include "paracr/scenarios.hpp"

namespace paracr::cli {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kReportSchema = "paracr-report/1";

struct Report {
  std::string command;  // "check" or "suite"
  std::string suite;    // "flat" or "example" for suites
  std::string G, H;
  std::optional<std::string> f;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  InvariantReport invariants;
  std::optional<ExampleReport> example;

  // 0 when every expected verdict holds, 2 otherwise.
  int exit_code() const;
};

// Inputs are parsed with the jet declarations (bare G, H_r, ...). Parse
// errors propagate as ParseError.
Report cmd_check(const std::string& G, const std::string& H, const SampleConfig& cfg);
// Throws DegenerateProfile for suite example with f'' = 0 and
// std::invalid_argument for unknown suite names.
Report cmd_suite(const std::string& name, const std::optional<std::string>& f, const SampleConfig& cfg);

// Canonical JSON, two-space indented, keys in a fixed order.
std::string to_json(const Report& r);
// Inverse of to_json; throws std::runtime_error on schema mismatch.
Report report_from_json(const std::string& text);
// "path: value" lines rendered from the JSON form.
std::string to_text(const Report& r);

// One "p,G" pair per line, '#' starts a comment. Values are integers, a/b
// or decimals; the exact fit is used when no value is a decimal.
struct Samples {
  std::vector<std::pair<Rational, Rational>> exact;
  std::vector<std::pair<double, double>> approx;
  bool is_exact = true;
};
Samples read_samples(std::istream& in);

// Full command line, argv[0] included. Returns the process exit code:
// 0 success, 2 verdicts not as expected, 1 usage or input errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace paracr::cli
