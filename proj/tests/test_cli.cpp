#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "doctest.h"

#include "paracr/cli.hpp"

using namespace paracr;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "paracr");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const std::string& rel) { return std::string(PARACR_FIXTURE_DIR) + "/" + rel; }

// Every nonzero verdict anywhere in the report has a witness and a value.
void check_witnesses(const json& j) {
  if (j.is_object()) {
    if (j.contains("status") && j["status"] == "nonzero") {
      CHECK(j.contains("witness"));
      CHECK(j.contains("value"));
    }
    for (const auto& [k, v] : j.items()) check_witnesses(v);
  } else if (j.is_array()) {
    for (const auto& v : j) check_witnesses(v);
  }
}

}  // namespace

TEST_CASE("check subcommand") {
  auto flat = run({"check", "p^2/4", "0"});
  CHECK(flat.code == 0);
  json j = json::parse(flat.out);
  CHECK(j["schema"] == "paracr-report/1");
  CHECK(j["tool_version"] == "0.1.0");
  CHECK(j["invariants"]["flags"]["flat"] == true);
  CHECK(j["exit_code"] == 0);

  auto family = run({"check", "f(p)", "-r^2*f'''(p)/f''(p)"});
  CHECK(family.code == 0);
  j = json::parse(family.out);
  CHECK(j["input"]["H"] == "-r^2*f'''(p)/f''(p)");
  CHECK(j["invariants"]["flags"]["contact_projective_pair"] == true);
  CHECK(j["invariants"]["flags"]["flat"] == false);

  auto bad = run({"check", "p^2", "p"});
  CHECK(bad.code == 2);
  j = json::parse(bad.out);
  CHECK(j["admissibility"]["integrable"]["status"] == "nonzero");
  CHECK(j["admissibility"]["in_class"] == false);
  CHECK(j["invariants"]["flags"].is_null());
  check_witnesses(j);

  // a bare leading minus is an expression, not a flag
  CHECK(run({"check", "p^2", "-r"}).code == 2);
}

TEST_CASE("usage and parse errors") {
  auto parse = run({"check", "p^(", "0"});
  CHECK(parse.code == 1);
  CHECK(parse.err.find("offset") != std::string::npos);
  CHECK(parse.out.empty());
  CHECK(run({"check", "p^2"}).code == 1);
  CHECK(run({}).code == 1);
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({"check", "p^2", "0", "--format", "yaml"}).code == 1);
  CHECK(run({"check", "p^2", "0", "--samples", "0"}).code == 1);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"--version"}).out.find("0.1.0") != std::string::npos);
}

TEST_CASE("suite subcommand") {
  auto flat = run({"suite", "flat"});
  CHECK(flat.code == 0);
  json j = json::parse(flat.out);
  for (const char* k : {"W_verdict", "M_verdict", "N_verdict", "Z_verdict"})
    CHECK(j["invariants"][k]["status"] == "structurally_zero");
  CHECK(j["input"]["G"] == "p^2/4");

  auto ex = run({"suite", "example", "--f", "p^4"});
  CHECK(ex.code == 0);
  j = json::parse(ex.out);
  CHECK(j["example"]["passed"] == true);
  CHECK(j["example"]["wunschmann"]["status"] == "nonzero");
  CHECK(j["example"]["warnings"].size() == 1);
  check_witnesses(j);

  auto degenerate = run({"suite", "example", "--f", "p"});
  CHECK(degenerate.code == 1);
  CHECK(degenerate.err.find("f''") != std::string::npos);
  CHECK(run({"suite", "example"}).code == 1);
  CHECK(run({"suite", "sphere"}).code == 1);
}

TEST_CASE("report round trip") {
  SampleConfig cfg;
  cfg.seed = 1234;
  cfg.samples = 16;
  std::vector<cli::Report> reports = {
      cli::cmd_check("p^2/4", "0", cfg),
      cli::cmd_check("p^2", "p", cfg),
      cli::cmd_check("G", "H", cfg),
      cli::cmd_check("f(p)", "-r^2*f'''(p)/f''(p)", cfg),
      cli::cmd_suite("flat", std::nullopt, cfg),
      cli::cmd_suite("example", std::string("p^4"), cfg),
      cli::cmd_suite("example", std::string("f(p)"), cfg),
  };
  for (const auto& r : reports) {
    std::string text = cli::to_json(r);
    cli::Report back = cli::report_from_json(text);
    CHECK(cli::to_json(back) == text);
    CHECK(back.exit_code() == r.exit_code());
    CHECK(cli::to_text(back) == cli::to_text(r));
  }
  CHECK_THROWS(cli::report_from_json(R"({"schema": "other/1"})"));
}

TEST_CASE("determinism and seeds") {
  auto a = run({"check", "G", "H", "--seed", "42"});
  auto b = run({"check", "G", "H", "--seed", "42"});
  CHECK(a.out == b.out);
  auto c = run({"check", "G", "H", "--seed", "43"});
  CHECK(a.out != c.out);

  setenv("PARACR_SEED", "42", 1);
  auto env = run({"check", "G", "H"});
  CHECK(env.out == a.out);
  auto over = run({"check", "G", "H", "--seed", "43"});
  CHECK(over.out == c.out);
  unsetenv("PARACR_SEED");

  CHECK(json::parse(a.out)["seed"] == 42);
  auto text = run({"check", "p^2/4", "0", "--format", "text"});
  CHECK(text.out.find("invariants.flags.flat: true\n") != std::string::npos);
  CHECK(text.out.find("exit_code: 0\n") != std::string::npos);
}

TEST_CASE("monge-fit subcommand") {
  auto flat = run({"monge-fit", fixture("samples/flat_model.csv")});
  CHECK(flat.code == 0);
  json j = json::parse(flat.out);
  CHECK(j["residual"] == 0.0);
  CHECK(j["exact_coeffs"] == json::array({"0", "0", "-1/4", "1", "0", "0"}));

  j = json::parse(run({"monge-fit", fixture("samples/circle.csv")}).out);
  CHECK(j["exact_coeffs"] == json::array({"1", "0", "1", "0", "0", "-1"}));

  j = json::parse(run({"monge-fit", fixture("samples/quintic.csv")}).out);
  CHECK(j["input"]["exact_input"] == false);
  CHECK(j["exact_coeffs"].is_null());
  CHECK(j["residual"].get<double>() > 1e-3);

  CHECK(run({"monge-fit", fixture("samples/missing.csv")}).code == 1);
}

TEST_CASE("sample file reader") {
  std::istringstream in("# header\n1, 2\n\n-3/4,5 # trailing\n");
  auto s = cli::read_samples(in);
  CHECK(s.is_exact);
  REQUIRE(s.exact.size() == 2);
  CHECK(s.exact[1].first == Rational(-3, 4));
  CHECK(s.approx[1].second == 5.0);

  std::istringstream dec("1,2\n0.5,1e-3\n");
  auto d = cli::read_samples(dec);
  CHECK_FALSE(d.is_exact);
  CHECK(d.exact.empty());
  CHECK(d.approx[1].second == doctest::Approx(0.001));

  std::istringstream bad("1;2\n");
  CHECK_THROWS(cli::read_samples(bad));
  std::istringstream word("1,two\n");
  CHECK_THROWS(cli::read_samples(word));
  std::istringstream zero("1/0,2\n");
  CHECK_THROWS(cli::read_samples(zero));
}

TEST_CASE("eds-verify subcommand") {
  for (const char* f : {"eds/contact_sp4.json", "eds/para_cr.json", "eds/para_cr_restricted.json"}) {
    auto r = run({"eds-verify", "--fixture", fixture(f), "--flat"});
    CHECK(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j["clean"] == true);
    for (const auto& sys : j["systems"])
      for (const auto& res : sys["residuals"]) CHECK(res["classification"] == "identically_zero");
  }
  json sp4 = json::parse(run({"eds-verify", "--fixture", fixture("eds/contact_sp4.json"), "--flat"}).out);
  CHECK(sp4["input"]["checksum"] == "0xf7a11072057f1c27");
  CHECK(sp4["curvature"]["zero"] == true);

  // without flattening the generic residuals are reported, not judged
  auto generic = run({"eds-verify", "--fixture", fixture("eds/para_cr.json")});
  CHECK(generic.code == 0);
  json g = json::parse(generic.out);
  CHECK(g["systems"].size() == 2);
  CHECK(g["systems"][1]["name"] == "weight_corrected");

  // one flipped sign makes the flat system fail
  std::ifstream in(fixture("eds/para_cr_restricted.json"));
  json fx = json::parse(in);
  auto& term = fx["structure"]["w1"][1];
  term[0] = term[0] == "1" ? "-1" : "1";
  std::string path = "mutated_restricted.json";
  std::ofstream(path) << fx.dump();
  auto mutated = run({"eds-verify", "--fixture", path, "--flat"});
  CHECK(mutated.code == 2);
  CHECK(json::parse(mutated.out)["clean"] == false);
  std::remove(path.c_str());

  CHECK(run({"eds-verify", "--fixture", "nowhere.json"}).code == 1);
  CHECK(run({"eds-verify"}).code == 1);
}
