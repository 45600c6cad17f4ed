#include "cli.hpp"

#include <CLI11.hpp>
#include <Eigen/Core>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include "bellforge/catalog.hpp"
#include "bellforge/csderive.hpp"
#include "bellforge/errors.hpp"
#include "bellforge/lhvlab.hpp"
#include "bellforge/polynomial_io.hpp"
#include "bellforge/qviolation.hpp"

#ifndef BELLFORGE_VERSION
#define BELLFORGE_VERSION "unknown"
#endif

namespace bellforge::cli {

namespace {

using io::Json;

struct Common {
  std::uint64_t seed = 1;
  int restarts = 50;
  double tol = 1e-12;
  std::string variant = "canonical";
  bool json = false;
  std::string out;
};

struct Input {
  std::string label;
  ExtendedPolynomial poly;
  std::optional<catalog::Shift> shift;
};

std::string g12(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string scenario_str(const Scenario& s) {
  return "N=" + std::to_string(s.parties()) + " M=" + std::to_string(s.settings());
}

std::string spectrum_str(const lhv::RootSpectrum& s) {
  std::string out;
  for (const auto& [r, n] : s.entries) {
    if (!out.empty()) out += ", ";
    out += r.str() + " x" + std::to_string(n);
  }
  return out;
}

Input load(const std::string& spec, const Common& c) {
  constexpr std::string_view prefix = "catalog:";
  if (spec.starts_with(prefix)) {
    const std::string name = spec.substr(prefix.size());
    const auto variant = catalog::parse_i42_variant(c.variant);
    catalog::CatalogEntry e = catalog::find(name, variant);
    Input in{spec, e.polynomial, std::nullopt};
    if (name == "i42") {
      const auto resolved = variant == catalog::I42Variant::canonical ? catalog::resolve_i42_canonical() : variant;
      in.label += " (variant " + catalog::to_string(resolved) + ")";
    }
    if (e.shift.offset != Rational(0) || e.shift.scale != Rational(1)) in.shift = e.shift;
    return in;
  }
  return {spec, io::polynomial_from_json(io::read_file(spec)), std::nullopt};
}

quantum::SeesawOptions seesaw_options(const Common& c) {
  if (c.restarts < 1) throw InvalidArgument("--restarts must be positive");
  if (!(c.tol > 0)) throw InvalidArgument("--tol must be positive");
  quantum::SeesawOptions o;
  o.seed = c.seed;
  o.restarts = c.restarts;
  o.tolerance = c.tol;
  return o;
}

Json bound_json(const lhv::LhvBound& b) {
  Json j = Json::object();
  j["min"] = io::to_json(b.min);
  j["max"] = io::to_json(b.max);
  return j;
}

// ---- classify ----

int cmd_classify(const std::string& spec, const Common& c, std::ostream& out) {
  const Input in = load(spec, c);
  const auto spectrum = lhv::enumerate_roots(in.poly);
  const auto cls = lhv::classify(spectrum);
  const auto bound = lhv::lhv_bound(in.poly);
  std::optional<lhv::RootSpectrum> shifted_spectrum;
  if (in.shift) {
    ExtendedPolynomial b = in.shift->scale * in.poly;
    b += ExtendedPolynomial::constant(in.poly.scenario(), in.shift->offset);
    shifted_spectrum = lhv::enumerate_roots(b);
  }
  if (c.json) {
    Json j = Json::object();
    j["input"] = in.label;
    j["scenario"] = io::to_json(in.poly.scenario());
    j["spectrum"] = io::to_json(spectrum);
    j["class"] = io::to_json(cls);
    j["lhv_bound"] = bound_json(bound);
    if (shifted_spectrum) {
      Json s = Json::object();
      s["offset"] = io::to_json(in.shift->offset);
      s["scale"] = io::to_json(in.shift->scale);
      s["spectrum"] = io::to_json(*shifted_spectrum);
      s["class"] = io::to_json(lhv::classify(*shifted_spectrum));
      j["shifted"] = std::move(s);
    }
    out << io::dump(j);
    return kOk;
  }
  out << "inequality: " << in.label << "\n";
  out << "scenario: " << scenario_str(in.poly.scenario()) << "\n";
  out << "roots: " << spectrum_str(spectrum) << "\n";
  out << "class: " << cls.label() << "\n";
  out << "lhv_bound: [" << bound.min << ", " << bound.max << "]\n";
  if (shifted_spectrum) {
    out << "shifted: " << in.shift->offset << " + " << in.shift->scale << " I\n";
    out << "shifted roots: " << spectrum_str(*shifted_spectrum) << "\n";
    out << "shifted class: " << lhv::classify(*shifted_spectrum).label() << "\n";
  }
  return kOk;
}

// ---- certify ----

int cmd_certify(const std::string& spec, const std::optional<std::string>& bound_text, const Common& c,
                std::ostream& out) {
  const Input in = load(spec, c);
  const BellPolynomial p = to_bell(in.poly);
  const auto bound = lhv::lhv_bound(p);
  const Rational claimed = bound_text ? Rational::parse(*bound_text) : bound.max;
  const auto report = lhv::is_tight(p, claimed);
  if (c.json) {
    Json j = Json::object();
    j["input"] = in.label;
    j["tightness"] = io::to_json(report);
    j["lhv_bound"] = bound_json(bound);
    out << io::dump(j);
  } else {
    out << "inequality: " << in.label << "\n";
    out << "bound: " << claimed << "\n";
    out << "lhv_bound: [" << bound.min << ", " << bound.max << "]\n";
    out << "valid: " << (report.valid ? "true" : "false") << "\n";
    out << "saturating: " << report.saturating_count << "\n";
    out << "affine_rank: " << report.affine_rank << "\n";
    out << "polytope_dim: " << report.polytope_dim << "\n";
    out << "is_facet: " << (report.is_facet ? "true" : "false") << "\n";
  }
  return report.is_facet ? kOk : kFail;
}

// ---- qmax ----

int cmd_qmax(const std::string& spec, const std::string& state, double xi, const Common& c, std::ostream& out) {
  const Input in = load(spec, c);
  const BellPolynomial p = to_bell(in.poly);
  const auto opts = seesaw_options(c);
  quantum::OptimizationResult r;
  if (state == "ghz") {
    r = quantum::seesaw_settings(p, quantum::ghz(p.scenario().parties(), xi), opts);
  } else {
    r = quantum::seesaw_global(p, opts);
  }
  if (c.json) {
    Json j = Json::object();
    j["input"] = in.label;
    j["state"] = state;
    if (state == "ghz") j["xi"] = xi;
    j["result"] = io::to_json(r);
    out << io::dump(j);
  } else {
    out << "inequality: " << in.label << "\n";
    out << "state: " << state;
    if (state == "ghz") out << " xi=" << g12(xi);
    out << "\n";
    out << "seed: " << c.seed << "\n";
    out << "value: " << g12(r.value) << "\n";
    out << "restarts_used: " << r.restarts_used << "\n";
    out << "spread: " << g12(r.spread) << "\n";
    out << "converged: " << (r.converged ? "true" : "false") << "\n";
  }
  return r.converged ? kOk : kNumerical;
}

// ---- scan ----

int cmd_scan(const std::string& spec, int grid, double lo, double hi, const Common& c, std::ostream& out) {
  const Input in = load(spec, c);
  const BellPolynomial p = to_bell(in.poly);
  if (grid < 1) throw InvalidArgument("--grid must be positive");
  if (lo < 0 || hi > std::numbers::pi / 2 + 1e-12 || lo > hi) throw InvalidArgument("grid must lie in [0, pi/2]");
  const auto rows = quantum::scan_ghz(p, quantum::linspace(lo, hi, grid), seesaw_options(c));
  bool all_converged = true;
  if (c.json) {
    Json arr = Json::array();
    for (const auto& r : rows) {
      arr.push_back({{"xi", r.xi}, {"value", r.value}, {"restarts_used", r.restarts_used}, {"converged", r.converged}});
      all_converged = all_converged && r.converged;
    }
    Json j = Json::object();
    j["input"] = in.label;
    j["seed"] = c.seed;
    j["rows"] = std::move(arr);
    out << io::dump(j);
  } else {
    out << "xi,value,restarts_used,converged\n";
    for (const auto& r : rows) {
      out << g12(r.xi) << "," << g12(r.value) << "," << r.restarts_used << "," << (r.converged ? "true" : "false")
          << "\n";
      all_converged = all_converged && r.converged;
    }
  }
  return all_converged ? kOk : kNumerical;
}

// ---- visibility ----

int cmd_visibility(const std::string& spec, const std::string& state, double xi,
                   const std::optional<std::string>& bound_text, const Common& c, std::ostream& out) {
  const Input in = load(spec, c);
  const BellPolynomial p = to_bell(in.poly);
  auto opts = seesaw_options(c);
  const double bound = bound_text ? Rational::parse(*bound_text).to_double() : lhv::lhv_bound(p).max.to_double();
  std::optional<quantum::PureState> psi;
  if (state == "ghz") {
    psi = quantum::ghz(p.scenario().parties(), xi);
  } else {
    const auto best = quantum::seesaw_global(p, opts);
    psi = best.state;
    opts.warm_start = best.config;
  }
  const auto v = quantum::visibility_threshold(p, *psi, opts, bound);
  if (c.json) {
    Json j = Json::object();
    j["input"] = in.label;
    j["state"] = state;
    if (state == "ghz") j["xi"] = xi;
    j["bound"] = bound;
    j["visibility"] = v.visibility;
    j["quantum_value"] = v.quantum_value;
    j["noise_value"] = v.noise_value;
    j["optimization"] = io::to_json(v.optimization);
    out << io::dump(j);
  } else {
    out << "inequality: " << in.label << "\n";
    out << "state: " << state;
    if (state == "ghz") out << " xi=" << g12(xi);
    out << "\n";
    out << "seed: " << c.seed << "\n";
    out << "bound: " << g12(bound) << "\n";
    out << "quantum_value: " << g12(v.quantum_value) << "\n";
    out << "noise_value: " << g12(v.noise_value) << "\n";
    out << "visibility: " << g12(v.visibility) << "\n";
  }
  return v.optimization.converged ? kOk : kNumerical;
}

// ---- derive-verify ----

std::string values_str(const derive::ConstraintSystem& cs, const derive::SymbolValues& v) {
  std::string out;
  for (const auto& s : cs.symbols) {
    if (!out.empty()) out += ' ';
    auto it = v.find(s);
    out += s + "=" + (it == v.end() ? std::string("?") : it->second.str());
  }
  return out;
}

struct Verdict {
  bool pass = false;
  Json json;
};

Verdict check_solution(const derive::Ansatz& a, const derive::ConstraintSystem& cs, const derive::SymbolValues& v,
                       bool as_json, std::ostream& out) {
  const auto report = derive::verify_solution(cs, v);
  Verdict verdict{report.pass(), Json::object()};
  verdict.json["values"] = io::to_json(v);
  verdict.json["residuals"] = io::to_json(report);
  if (!as_json) {
    out << "  values: " << values_str(cs, v) << "\n";
    std::size_t zero = 0;
    for (const auto& r : report.residuals) zero += r.is_zero() ? 1 : 0;
    out << "  residuals: " << zero << "/" << report.residuals.size() << " zero\n";
    for (std::size_t i = 0; i < report.residuals.size(); ++i) {
      if (report.residuals[i].is_zero()) continue;
      const auto& e = cs.equations[i];
      out << "    " << e.product << " " << e.monomial.str() << ": " << e.form.str(cs.symbols) << " = "
          << report.residuals[i] << "\n";
    }
  }
  if (!report.pass()) {
    if (!as_json) out << "  result: FAIL\n";
    return verdict;
  }
  const auto f = derive::instantiate_f(a, v);
  const auto g = derive::instantiate_g(a, v);
  const auto ineq = derive::implied_inequality(f, g);
  verdict.json["implied"] = ineq.str();
  const auto sq = derive::squared_form(ineq);
  const auto lin = sq ? derive::linearize(*sq) : std::nullopt;
  if (sq) verdict.json["squared"] = sq->str();
  if (lin) verdict.json["linear"] = lin->str();
  if (!as_json) {
    out << "  result: PASS\n";
    out << "  f = " << f.str() << "\n";
    out << "  g = " << g.str() << "\n";
    out << "  implied: " << ineq.str() << "\n";
    if (sq) out << "  squared: " << sq->str() << "\n";
    if (lin) out << "  linear: " << lin->str() << "\n";
  }
  return verdict;
}

int cmd_derive_verify(const std::string& path, bool solve, bool show_system, const Common& c, bool restarts_given,
                      std::ostream& out) {
  const Json file = io::read_file(path);
  const derive::Ansatz a = io::ansatz_from_json(file);
  const auto cs = derive::build_constraints(a);

  std::vector<derive::SymbolValues> given;
  if (file.contains("solution")) given.push_back(io::symbol_values_from_json(file["solution"]));
  if (file.contains("solutions")) {
    if (!file["solutions"].is_array()) throw ParseError("\"solutions\" must be an array");
    for (const auto& s : file["solutions"]) given.push_back(io::symbol_values_from_json(s));
  }

  Json j = Json::object();
  if (c.json) {
    j["ansatz"] = path;
    j["system"] = io::to_json(cs);
  } else {
    out << "ansatz: " << path << "\n";
    out << "scenario: " << scenario_str(cs.scenario) << "\n";
    out << "symbols: " << cs.symbols.size() << "\n";
    out << "equations: " << cs.equations.size() << "\n";
    if (show_system) {
      for (const auto& e : cs.equations) {
        out << "  " << e.product << " " << e.monomial.str() << ": " << e.form.str(cs.symbols) << " = 0\n";
      }
    }
  }

  bool all_pass = true;
  Json given_json = Json::array();
  for (std::size_t i = 0; i < given.size(); ++i) {
    if (!c.json) out << "solution " << i + 1 << ":\n";
    auto v = check_solution(a, cs, given[i], c.json, out);
    all_pass = all_pass && v.pass;
    given_json.push_back(std::move(v.json));
  }
  if (c.json) j["solutions"] = std::move(given_json);

  if (solve) {
    derive::NumericOptions opts;
    opts.seed = c.seed;
    if (restarts_given) opts.restarts = c.restarts;
    const auto found = derive::solve_numeric(cs, opts);
    Json found_json = Json::array();
    if (!c.json) {
      out << "numeric: seed=" << opts.seed << " restarts=" << found.restarts_used
          << " best_residual=" << g12(found.best_residual) << " exact_solutions=" << found.solutions.size() << "\n";
    }
    for (std::size_t i = 0; i < found.solutions.size(); ++i) {
      if (!c.json) out << "numeric " << i + 1 << ":\n";
      auto v = check_solution(a, cs, found.solutions[i].values, c.json, out);
      v.json["seed"] = found.solutions[i].seed;
      found_json.push_back(std::move(v.json));
    }
    if (c.json) {
      j["numeric"] = {{"seed", opts.seed},
                      {"restarts_used", found.restarts_used},
                      {"best_residual", found.best_residual},
                      {"solutions", std::move(found_json)}};
    }
    if (found.solutions.empty()) all_pass = false;
  }

  if (c.json) {
    j["pass"] = all_pass;
    out << io::dump(j);
  } else {
    out << "verdict: " << (all_pass ? "PASS" : "FAIL") << "\n";
  }
  return all_pass ? kOk : kFail;
}

// ---- catalog ----

int cmd_catalog_list(const Common& c, std::ostream& out) {
  const auto& all = catalog::entries();
  if (c.json) {
    Json arr = Json::array();
    for (const auto& e : all) {
      arr.push_back({{"name", e.name},
                     {"scenario", io::to_json(e.polynomial.scenario())},
                     {"claimed_class", e.claimed_class.label()},
                     {"claimed_bound", e.claimed_bound.str()},
                     {"computable", e.computable()},
                     {"note", e.note}});
    }
    out << io::dump(arr);
    return kOk;
  }
  out << "name   scenario  claimed_class bound  note\n";
  for (const auto& e : all) {
    char line[256];
    std::snprintf(line, sizeof line, "%-6s %-9s %-13s %-6s ", e.name.c_str(),
                  scenario_str(e.polynomial.scenario()).c_str(), e.claimed_class.label().c_str(),
                  e.claimed_bound.str().c_str());
    out << line << e.note << "\n";
  }
  return kOk;
}

int cmd_catalog_export(const std::string& name, const Common& c, std::ostream& out) {
  const auto e = catalog::find(name, catalog::parse_i42_variant(c.variant));
  out << io::dump(io::to_json(e.polynomial));
  return kOk;
}

// ---- sample ----

int cmd_sample(const std::string& spec, int count, const Common& c, std::ostream& out) {
  const Input in = load(spec, c);
  const BellPolynomial p = to_bell(in.poly);
  if (count < 0) throw InvalidArgument("--count must be nonnegative");
  const auto rows = quantum::sample_random_pure_states(p, count, seesaw_options(c));
  if (c.json) {
    Json arr = Json::array();
    for (const auto& r : rows) {
      arr.push_back(
          {{"state_id", r.state_id}, {"value", r.value}, {"restarts_used", r.restarts_used}, {"converged", r.converged}});
    }
    Json j = Json::object();
    j["input"] = in.label;
    j["seed"] = c.seed;
    j["rows"] = std::move(arr);
    out << io::dump(j);
  } else {
    out << "state_id,value,restarts_used,converged\n";
    for (const auto& r : rows) {
      out << r.state_id << "," << g12(r.value) << "," << r.restarts_used << "," << (r.converged ? "true" : "false")
          << "\n";
    }
  }
  return kOk;
}

// ---- manifest and replay ----

std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Json manifest(const std::string& command, const std::vector<std::string>& args, const Common& c) {
  Json m = Json::object();
  m["command"] = command;
  m["arguments"] = args;
  m["seed"] = c.seed;
  m["restarts"] = c.restarts;
  m["tolerance"] = c.tol;
  m["variant"] = c.variant;
  m["output"] = c.out;
  m["versions"] = {{"bellforge", BELLFORGE_VERSION},
                   {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                 std::to_string(EIGEN_MINOR_VERSION)}};
  m["timestamp"] = utc_timestamp();
  return m;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw InvalidArgument("cannot write " + path);
  f << text;
  if (!f) throw InvalidArgument("failed writing " + path);
}

std::vector<std::string> without_out(const std::vector<std::string>& args) {
  std::vector<std::string> kept;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--out") {
      ++i;
      continue;
    }
    if (args[i].starts_with("--out=")) continue;
    kept.push_back(args[i]);
  }
  return kept;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cmd_replay(const std::string& path, const Common& c, std::ostream& out, std::ostream& err) {
  const Json m = io::read_file(path);
  if (!m.contains("arguments") || !m["arguments"].is_array()) throw ParseError("manifest has no \"arguments\" array");
  std::vector<std::string> args;
  for (const auto& a : m["arguments"]) {
    if (!a.is_string()) throw ParseError("manifest arguments must be strings");
    args.push_back(a.get<std::string>());
  }
  if (!args.empty() && args.front() == "replay") throw ParseError("a manifest cannot replay another replay");
  args = without_out(args);
  if (!c.out.empty()) {
    args.push_back("--out");
    args.push_back(c.out);
  }
  return dispatch(args, out, err);
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bell inequality toolkit: exact classical analysis, derivation and quantum violation", "bellforge"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(BELLFORGE_VERSION));

  Common c;
  app.add_option("--seed", c.seed, "Random seed")->capture_default_str();
  auto* restarts_opt = app.add_option("--restarts", c.restarts, "Optimizer restarts")->capture_default_str();
  app.add_option("--tol", c.tol, "Convergence tolerance on the objective")->capture_default_str();
  app.add_option("--variant", c.variant, "Reading of the i42 table")->capture_default_str();
  app.add_flag("--json", c.json, "Emit JSON instead of text");
  app.add_option("--out", c.out, "Write the primary output to FILE plus FILE.manifest.json");

  std::string input;
  std::string state = "optimize";
  double xi = std::numbers::pi / 4;
  std::optional<std::string> bound;
  int grid = 50;
  double lo = 0.02;
  double hi = std::numbers::pi / 2 - 0.02;
  int count = 20;
  bool solve = false;
  bool show_system = false;
  std::string name;

  auto* classify = app.add_subcommand("classify", "Root spectrum and S_n class");
  classify->add_option("input", input, "catalog:NAME or inequality file")->required();

  auto* certify = app.add_subcommand("certify", "Validity and facet check against a bound");
  certify->add_option("input", input, "catalog:NAME or inequality file")->required();
  certify->add_option("--bound", bound, "Claimed bound (default: exact LHV maximum)");

  auto* qmax = app.add_subcommand("qmax", "Optimized quantum value");
  qmax->add_option("input", input, "catalog:NAME or inequality file")->required();
  qmax->add_option("--state", state, "ghz or optimize")->check(CLI::IsMember({"ghz", "optimize"}))->capture_default_str();
  qmax->add_option("--xi", xi, "Generalized GHZ angle")->capture_default_str();

  auto* scan = app.add_subcommand("scan", "Generalized GHZ scan (CSV)");
  scan->add_option("input", input, "catalog:NAME or inequality file")->required();
  scan->add_option("--grid", grid, "Number of grid points")->capture_default_str();
  scan->add_option("--lo", lo, "First angle")->capture_default_str();
  scan->add_option("--hi", hi, "Last angle")->capture_default_str();

  auto* visibility = app.add_subcommand("visibility", "Werner visibility threshold");
  visibility->add_option("input", input, "catalog:NAME or inequality file")->required();
  visibility->add_option("--state", state, "ghz or optimize")->check(CLI::IsMember({"ghz", "optimize"}));
  visibility->add_option("--xi", xi, "Generalized GHZ angle")->capture_default_str();
  visibility->add_option("--bound", bound, "Classical bound (default: exact LHV maximum)");

  auto* derive_verify = app.add_subcommand("derive-verify", "Check ansatz solutions exactly");
  derive_verify->add_option("ansatz", input, "Ansatz file")->required();
  derive_verify->add_flag("--solve", solve, "Also search for solutions numerically");
  derive_verify->add_flag("--show-system", show_system, "Print the constraint equations");

  auto* cat = app.add_subcommand("catalog", "Built-in inequalities");
  cat->require_subcommand(1);
  auto* cat_list = cat->add_subcommand("list", "List entries");
  auto* cat_export = cat->add_subcommand("export", "Print an entry in the inequality file format");
  cat_export->add_option("name", name, "Entry name")->required();

  auto* sample = app.add_subcommand("sample", "Optimized values on random pure states (CSV)");
  sample->add_option("input", input, "catalog:NAME or inequality file")->required();
  sample->add_option("--count", count, "Number of random states")->capture_default_str();

  auto* replay = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  replay->add_option("manifest", input, "Manifest file")->required();

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kBadInput;
  }
  if (visibility->parsed() && !visibility->get_option("--state")->count()) state = "ghz";

  if (replay->parsed()) return cmd_replay(input, c, out, err);

  std::ostringstream primary;
  int code = kOk;
  std::string command;
  if (classify->parsed()) {
    command = "classify";
    code = cmd_classify(input, c, primary);
  } else if (certify->parsed()) {
    command = "certify";
    code = cmd_certify(input, bound, c, primary);
  } else if (qmax->parsed()) {
    command = "qmax";
    code = cmd_qmax(input, state, xi, c, primary);
  } else if (scan->parsed()) {
    command = "scan";
    code = cmd_scan(input, grid, lo, hi, c, primary);
  } else if (visibility->parsed()) {
    command = "visibility";
    code = cmd_visibility(input, state, xi, bound, c, primary);
  } else if (derive_verify->parsed()) {
    command = "derive-verify";
    code = cmd_derive_verify(input, solve, show_system, c, restarts_opt->count() > 0, primary);
  } else if (cat_list->parsed()) {
    command = "catalog";
    code = cmd_catalog_list(c, primary);
  } else if (cat_export->parsed()) {
    command = "catalog";
    code = cmd_catalog_export(name, c, primary);
  } else if (sample->parsed()) {
    command = "sample";
    code = cmd_sample(input, count, c, primary);
  }

  if (c.out.empty()) {
    out << primary.str();
  } else {
    write_file(c.out, primary.str());
    write_file(c.out + ".manifest.json", io::dump(manifest(command, args, c)));
  }
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(args, out, err);
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kBadInput;
  }
}

}  // namespace bellforge::cli
