#include "paracr/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <regex>
#include <sstream>

#include "paracr/eds.hpp"
#include "paracr/parse.hpp"

namespace paracr::cli {

using nlohmann::ordered_json;

namespace {

Expr parse_jet(const std::string& s) { return parse(s, jet_parse_options()); }

Rational rational_from(const std::string& s) {
  Rational q(s, 10);
  if (q.get_den() == 0) throw std::runtime_error("zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

ordered_json point_json(const Point& pt) {
  ordered_json coords = ordered_json::object(), fns = ordered_json::object();
  for (const auto& [name, v] : pt.coords) coords[name] = v.get_str();
  for (const auto& [name, inst] : pt.functions) {
    ordered_json terms = ordered_json::array();
    for (const auto& [exps, c] : inst.terms) terms.push_back({{"exponents", exps}, {"coefficient", c.get_str()}});
    fns[name] = {{"arity", inst.arity}, {"degree", inst.degree}, {"terms", terms}};
  }
  return {{"coords", coords}, {"functions", fns}};
}

Point point_from(const ordered_json& j) {
  Point pt;
  for (const auto& [name, v] : j.at("coords").items()) pt.coords[name] = rational_from(v.get<std::string>());
  for (const auto& [name, f] : j.at("functions").items()) {
    FunctionInstance inst;
    inst.arity = f.at("arity").get<std::size_t>();
    inst.degree = f.at("degree").get<int>();
    for (const auto& t : f.at("terms"))
      inst.terms[t.at("exponents").get<std::vector<int>>()] = rational_from(t.at("coefficient").get<std::string>());
    pt.functions[name] = std::move(inst);
  }
  return pt;
}

ordered_json verdict_json(const ZeroVerdict& v) {
  ordered_json j = {{"status", to_string(v.status)}, {"samples", v.samples}, {"seed", v.seed}};
  if (v.witness) j["witness"] = point_json(*v.witness);
  if (v.value) j["value"] = v.value->get_str();
  return j;
}

ZeroVerdict verdict_from(const ordered_json& j) {
  ZeroVerdict v;
  v.status = zero_status_from_string(j.at("status").get<std::string>());
  v.samples = j.at("samples").get<std::size_t>();
  v.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("witness")) v.witness = point_from(j.at("witness"));
  if (j.contains("value")) v.value = rational_from(j.at("value").get<std::string>());
  return v;
}

ordered_json optional_expr(const std::optional<Expr>& e) { return e ? ordered_json(to_string(*e)) : ordered_json(); }

std::optional<Expr> optional_expr_from(const ordered_json& j) {
  if (j.is_null()) return std::nullopt;
  return parse_jet(j.get<std::string>());
}

ordered_json admissibility_json(const AdmissibilityReport& a) {
  return {{"levi_degenerate", verdict_json(a.levi_degenerate)},
          {"two_nondegenerate", verdict_json(a.two_nondegenerate)},
          {"integrable", verdict_json(a.integrable)},
          {"in_class", a.in_class()}};
}

AdmissibilityReport admissibility_from(const ordered_json& j) {
  return {verdict_from(j.at("levi_degenerate")), verdict_from(j.at("two_nondegenerate")),
          verdict_from(j.at("integrable"))};
}

ordered_json invariants_json(const InvariantReport& r) {
  ordered_json j = {{"W", to_string(r.W)},
                    {"M", to_string(r.M)},
                    {"N", to_string(r.N)},
                    {"Z", to_string(r.Z)},
                    {"W_verdict", verdict_json(r.W_verdict)},
                    {"M_verdict", verdict_json(r.M_verdict)},
                    {"N_verdict", verdict_json(r.N_verdict)},
                    {"Z_verdict", verdict_json(r.Z_verdict)},
                    {"B", optional_expr(r.B)},
                    {"C", optional_expr(r.C)}};
  if (r.flags)
    j["flags"] = {{"flat", r.flags->flat}, {"contact_projective_pair", r.flags->contact_projective_pair}};
  else
    j["flags"] = nullptr;
  return j;
}

InvariantReport invariants_from(const ordered_json& j, const AdmissibilityReport& a) {
  InvariantReport r;
  r.admissibility = a;
  r.W = parse_jet(j.at("W").get<std::string>());
  r.M = parse_jet(j.at("M").get<std::string>());
  r.N = parse_jet(j.at("N").get<std::string>());
  r.Z = parse_jet(j.at("Z").get<std::string>());
  r.W_verdict = verdict_from(j.at("W_verdict"));
  r.M_verdict = verdict_from(j.at("M_verdict"));
  r.N_verdict = verdict_from(j.at("N_verdict"));
  r.Z_verdict = verdict_from(j.at("Z_verdict"));
  r.B = optional_expr_from(j.at("B"));
  r.C = optional_expr_from(j.at("C"));
  if (!j.at("flags").is_null())
    r.flags = InvariantFlags{j.at("flags").at("flat").get<bool>(), j.at("flags").at("contact_projective_pair").get<bool>()};
  return r;
}

ordered_json verdicts_json(const std::array<ZeroVerdict, 5>& vs) {
  ordered_json out = ordered_json::array();
  for (const auto& v : vs) out.push_back(verdict_json(v));
  return out;
}

std::array<ZeroVerdict, 5> verdicts_from(const ordered_json& j) {
  if (j.size() != 5) throw std::runtime_error("expected five verdicts");
  std::array<ZeroVerdict, 5> out;
  for (std::size_t i = 0; i < 5; ++i) out[i] = verdict_from(j.at(i));
  return out;
}

ordered_json example_json(const ExampleReport& e) {
  return {{"f", to_string(e.f)},
          {"admissibility", admissibility_json(e.admissibility)},
          {"N_zero", verdict_json(e.N_zero)},
          {"chern_zero", verdict_json(e.chern_zero)},
          {"wunschmann", verdict_json(e.wunschmann)},
          {"wunschmann_vs_monge", verdict_json(e.wunschmann_vs_monge)},
          {"coordinate_match", verdicts_json(e.coordinate_match)},
          {"pullback_match", verdicts_json(e.pullback_match)},
          {"rescaling_in_group", e.rescaling_in_group},
          {"general_solution", verdict_json(e.general_solution)},
          {"tangent", verdict_json(e.tangent)},
          {"contact_tangency", verdict_json(e.contact_tangency)},
          {"geodesic_residual", verdict_json(e.geodesic_residual)},
          {"warnings", e.warnings},
          {"passed", e.passed()}};
}

ExampleReport example_from(const ordered_json& j) {
  ExampleReport e;
  e.f = parse_jet(j.at("f").get<std::string>());
  e.admissibility = admissibility_from(j.at("admissibility"));
  e.N_zero = verdict_from(j.at("N_zero"));
  e.chern_zero = verdict_from(j.at("chern_zero"));
  e.wunschmann = verdict_from(j.at("wunschmann"));
  e.wunschmann_vs_monge = verdict_from(j.at("wunschmann_vs_monge"));
  e.coordinate_match = verdicts_from(j.at("coordinate_match"));
  e.pullback_match = verdicts_from(j.at("pullback_match"));
  e.rescaling_in_group = j.at("rescaling_in_group").get<bool>();
  e.general_solution = verdict_from(j.at("general_solution"));
  e.tangent = verdict_from(j.at("tangent"));
  e.contact_tangency = verdict_from(j.at("contact_tangency"));
  e.geodesic_residual = verdict_from(j.at("geodesic_residual"));
  e.warnings = j.at("warnings").get<std::vector<std::string>>();
  return e;
}

ordered_json report_json(const Report& r) {
  ordered_json input = {{"G", r.G}, {"H", r.H}};
  if (r.f) input["f"] = *r.f;
  ordered_json j = {{"schema", kReportSchema}, {"tool_version", kToolVersion}, {"command", r.command}};
  if (!r.suite.empty()) j["suite"] = r.suite;
  j["input"] = input;
  j["seed"] = r.seed;
  j["samples"] = r.samples;
  j["admissibility"] = admissibility_json(r.invariants.admissibility);
  j["invariants"] = invariants_json(r.invariants);
  if (r.example) j["example"] = example_json(*r.example);
  j["exit_code"] = r.exit_code();
  return j;
}

void flatten(const ordered_json& j, const std::string& path, std::ostream& out) {
  if (j.is_object() && !j.empty()) {
    for (const auto& [k, v] : j.items()) flatten(v, path.empty() ? k : path + "." + k, out);
  } else if (j.is_array() && !j.empty()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], path + "[" + std::to_string(i) + "]", out);
  } else {
    out << path << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << '\n';
  }
}

std::string render(const ordered_json& j, const std::string& format) {
  if (format == "text") {
    std::ostringstream out;
    flatten(j, "", out);
    return out.str();
  }
  return j.dump(2) + "\n";
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

ordered_json eds_report(const std::string& path, bool flat, int& exit_code) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw eds::FixtureError("cannot open fixture '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string bytes = buf.str();
  eds::Fixture fx = eds::parse_fixture(bytes);
  std::set<std::string> all(fx.system.coefficients().begin(), fx.system.coefficients().end());

  char checksum[19];
  std::snprintf(checksum, sizeof checksum, "0x%016llx", static_cast<unsigned long long>(eds::fnv1a(bytes)));
  ordered_json j = {{"schema", kReportSchema}, {"tool_version", kToolVersion}, {"command", "eds-verify"},
                    {"input", {{"fixture", path}, {"name", fx.name}, {"checksum", checksum}, {"flat", flat}}}};
  bool clean = true;
  auto residuals = [&](const eds::FormalSystem& s) {
    ordered_json out = ordered_json::array();
    for (const auto& r : eds::d_squared_residuals(flat ? eds::flat_specialize(s, all) : s)) {
      ordered_json e = {{"name", r.name}, {"classification", eds::to_string(r.classification)}};
      if (r.classification == eds::ResidualClass::Nonzero) e["atom_free"] = eds::to_string(r.atom_free);
      if (r.classification != eds::ResidualClass::IdenticallyZero) clean = false;
      out.push_back(e);
    }
    return out;
  };
  ordered_json systems = ordered_json::array();
  systems.push_back({{"name", "base"}, {"note", fx.description}, {"residuals", residuals(fx.system)}});
  for (const auto& [name, sys] : fx.variants)
    systems.push_back({{"name", name}, {"note", fx.variant_notes.at(name)}, {"residuals", residuals(sys)}});
  j["systems"] = systems;

  if (fx.connection) {
    eds::FormalSystem base = flat ? eds::flat_specialize(fx.system, all) : fx.system;
    eds::ConnectionMatrix w;
    for (const auto& row : *fx.connection) {
      std::vector<eds::FormalForm> r;
      for (const auto& e : row) r.push_back(flat ? eds::specialize(e, all) : e);
      w.push_back(std::move(r));
    }
    auto K = eds::connection_curvature(w, base);
    ordered_json entries = ordered_json::array();
    for (std::size_t a = 0; a < K.size(); ++a)
      for (std::size_t b = 0; b < K[a].size(); ++b)
        if (!K[a][b].is_zero()) entries.push_back({{"row", a}, {"column", b}, {"value", eds::to_string(K[a][b])}});
    j["curvature"] = {{"zero", entries.empty()}, {"nonzero_entries", entries}};
    if (!entries.empty()) clean = false;
  }
  j["clean"] = clean;
  exit_code = flat && !clean ? 2 : 0;
  return j;
}

ordered_json monge_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open sample file '" + path + "'");
  Samples s = read_samples(in);
  ConicFit fit = s.is_exact ? conic_fit(s.exact) : conic_fit(s.approx);
  ordered_json exact = nullptr;
  if (fit.exact_coeffs) {
    exact = ordered_json::array();
    for (const auto& c : *fit.exact_coeffs) exact.push_back(c.get_str());
  }
  return {{"schema", kReportSchema},
          {"tool_version", kToolVersion},
          {"command", "monge-fit"},
          {"input", {{"file", path}, {"samples", s.approx.size()}, {"exact_input", s.is_exact}}},
          {"coeffs", fit.coeffs},
          {"exact_coeffs", exact},
          {"residual", fit.residual}};
}

}  // namespace

int Report::exit_code() const {
  if (command == "suite" && suite == "example") return example && example->passed() ? 0 : 2;
  if (command == "suite") return invariants.flags && invariants.flags->flat ? 0 : 2;
  return invariants.admissibility.in_class() ? 0 : 2;
}

Report cmd_check(const std::string& G, const std::string& H, const SampleConfig& cfg) {
  PdeSystem sys(parse_jet(G), parse_jet(H));
  Report r;
  r.command = "check";
  r.G = G;
  r.H = H;
  r.seed = cfg.seed;
  r.samples = cfg.samples;
  r.invariants = classify(sys, cfg);
  return r;
}

Report cmd_suite(const std::string& name, const std::optional<std::string>& f, const SampleConfig& cfg) {
  Report r;
  r.command = "suite";
  r.suite = name;
  r.seed = cfg.seed;
  r.samples = cfg.samples;
  if (name == "flat") {
    PdeSystem sys = flat_model();
    r.G = to_string(sys.G());
    r.H = to_string(sys.H());
    r.invariants = classify(sys, cfg);
  } else if (name == "example") {
    if (!f) throw std::invalid_argument("suite example needs --f");
    Expr fe = parse_jet(*f);
    PdeSystem sys = f_family(fe, cfg);
    r.f = *f;
    r.G = to_string(sys.G());
    r.H = to_string(sys.H());
    r.invariants = classify(sys, cfg);
    r.example = run_example_suite(fe, cfg);
  } else {
    throw std::invalid_argument("unknown suite '" + name + "' (expected flat or example)");
  }
  return r;
}

std::string to_json(const Report& r) { return report_json(r).dump(2); }

Report report_from_json(const std::string& text) {
  ordered_json j = ordered_json::parse(text);
  if (j.value("schema", "") != kReportSchema) throw std::runtime_error("unsupported report schema");
  Report r;
  r.command = j.at("command").get<std::string>();
  r.suite = j.value("suite", "");
  r.G = j.at("input").at("G").get<std::string>();
  r.H = j.at("input").at("H").get<std::string>();
  if (j.at("input").contains("f")) r.f = j.at("input").at("f").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.samples = j.at("samples").get<std::size_t>();
  r.invariants = invariants_from(j.at("invariants"), admissibility_from(j.at("admissibility")));
  if (j.contains("example")) r.example = example_from(j.at("example"));
  return r;
}

std::string to_text(const Report& r) { return render(report_json(r), "text"); }

Samples read_samples(std::istream& in) {
  static const std::regex exact(R"([+-]?\d+(/\d+)?)");
  Samples s;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    auto comma = line.find(',');
    if (comma == std::string::npos) throw std::runtime_error("line " + std::to_string(lineno) + ": expected p,G");
    std::string a = trim(line.substr(0, comma)), b = trim(line.substr(comma + 1));
    auto value = [&](const std::string& t, Rational& q, double& d) {
      if (std::regex_match(t, exact)) {
        q = rational_from(t[0] == '+' ? t.substr(1) : t);
        d = q.get_d();
        return;
      }
      std::size_t used = 0;
      try {
        d = std::stod(t, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != t.size() || t.empty())
        throw std::runtime_error("line " + std::to_string(lineno) + ": bad number '" + t + "'");
      s.is_exact = false;
    };
    Rational qa, qb;
    double da = 0, db = 0;
    value(a, qa, da);
    value(b, qb, db);
    s.exact.emplace_back(qa, qb);
    s.approx.emplace_back(da, db);
  }
  if (!s.is_exact) s.exact.clear();
  return s;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"para-CR structure checks for z_y = G, z_xxx = H", "paracr"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);
  app.fallthrough();

  SampleConfig cfg;
  std::string format = "json";
  app.add_option("--seed", cfg.seed, "Sampling seed")->envname("PARACR_SEED");
  app.add_option("--samples", cfg.samples, "Random points per zero test")->check(CLI::PositiveNumber);
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "text"}));

  std::string G, H, suite, samples_path, fixture;
  std::optional<std::string> f;
  bool flat = false;
  auto* check = app.add_subcommand("check", "Admissibility and invariants of (G, H)");
  check->add_option("G", G, "z_y = G(x, y, z, p)")->required();
  check->add_option("H", H, "z_xxx = H(x, y, z, p, r)")->required();
  auto* suite_cmd = app.add_subcommand("suite", "Run the flat model or the f-family example");
  suite_cmd->add_option("name", suite, "flat or example")->required()->check(CLI::IsMember({"flat", "example"}));
  suite_cmd->add_option("--f", f, "f(p) for the example suite");
  auto* fit = app.add_subcommand("monge-fit", "Fit a conic to p,G samples");
  fit->add_option("file", samples_path, "Sample file")->required();
  auto* eds_cmd = app.add_subcommand("eds-verify", "d^2 residuals of a structure-equation fixture");
  eds_cmd->add_option("--fixture", fixture, "Fixture JSON")->required();
  eds_cmd->add_flag("--flat", flat, "Set every coefficient to zero first");

  // The only short option is -h, so any other "-..." token is an expression
  // such as -r^2*f'''(p)/f''(p); a leading space keeps CLI11 from reading it
  // as a flag.
  std::vector<std::string> args;
  for (int i = argc - 1; i > 0; --i) {
    std::string a = argv[i];
    if (a.size() > 1 && a[0] == '-' && a[1] != '-' && a != "-h") a.insert(0, " ");
    args.push_back(std::move(a));
  }

  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (check->parsed()) {
      Report r = cmd_check(trim(G), trim(H), cfg);
      out << render(report_json(r), format);
      return r.exit_code();
    }
    if (suite_cmd->parsed()) {
      Report r = cmd_suite(suite, f, cfg);
      out << render(report_json(r), format);
      return r.exit_code();
    }
    if (fit->parsed()) {
      out << render(monge_report(samples_path), format);
      return 0;
    }
    int code = 0;
    ordered_json j = eds_report(fixture, flat, code);
    out << render(j, format);
    return code;
  } catch (const ParseError& e) {
    err << "error: parse: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return 1;
}

}  // namespace paracr::cli
