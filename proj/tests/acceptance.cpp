// Acceptance runner: one PASS/FAIL line per criterion. With arguments, runs
// only the listed criteria. Exits 0 iff every selected criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "bellforge/catalog.hpp"
#include "bellforge/csderive.hpp"
#include "bellforge/lhvlab.hpp"
#include "bellforge/qviolation.hpp"
#include "support.hpp"

using namespace bellforge;

namespace {

constexpr double kPi = std::numbers::pi;
// A violation must clear rounding noise at the classical bound.
constexpr double kViolationMargin = 1e-9;

// Collects named sub-checks; the criterion passes when all of them do.
class Checks {
 public:
  void add(const std::string& name, bool ok, const std::string& detail = {}) {
    ok_ = ok_ && ok;
    if (!text_.empty()) text_ += "; ";
    text_ += name + (ok ? " ok" : " FAILED");
    if (!detail.empty()) text_ += " (" + detail + ")";
  }
  bool ok() const { return ok_; }
  const std::string& text() const { return text_; }

 private:
  bool ok_ = true;
  std::string text_;
};

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::string spectrum_str(const lhv::RootSpectrum& s) {
  std::ostringstream out;
  out << "{";
  bool first = true;
  for (const auto& [r, n] : s.entries) {
    out << (first ? "" : ", ") << r << ":" << n;
    first = false;
  }
  out << "}";
  return out.str();
}

quantum::SeesawOptions defaults(std::uint64_t seed = 1) {
  quantum::SeesawOptions o;
  o.seed = seed;
  return o;
}

ExtendedPolynomial ext_product(const Scenario& s, std::initializer_list<std::pair<int, int>> factors) {
  std::vector<std::uint32_t> masks(s.parties(), 0u);
  for (auto [party, setting] : factors) masks[party] ^= 1u << (setting - 1);
  return ExtendedPolynomial::monomial(s, Monomial(masks));
}

BellPolynomial shifted(const BellPolynomial& p, const Rational& offset, const Rational& scale) {
  return scale * p + BellPolynomial::constant(p.scenario(), offset);
}

void criterion1(Checks& c) {
  const auto p = catalog::chsh();
  const auto roots = lhv::enumerate_roots(p);
  lhv::RootSpectrum expected;
  expected.entries = {{Rational(-1), 8}, {Rational(1), 8}};
  expected.total = 16;
  c.add("roots", roots == expected, spectrum_str(roots));
  c.add("class S2", lhv::classify(roots) == lhv::SnClass::of(2));
  const auto b = lhv::lhv_bound(p);
  c.add("lhv_bound (-1,1)", b.min == Rational(-1) && b.max == Rational(1));
  const auto t = lhv::is_tight(p, 1);
  c.add("facet", t.is_facet, "rank " + std::to_string(t.affine_rank) + "/" + std::to_string(t.polytope_dim));
  const auto q = quantum::seesaw_global(p, defaults());
  c.add("seesaw sqrt2", std::abs(q.value - std::numbers::sqrt2) <= 1e-6, fmt(q.value));
}

void criterion2(Checks& c) {
  const auto a = testkit::chsh_ansatz();
  const auto cs = derive::build_constraints(a);
  const auto sol = testkit::chsh_solution();
  const auto report = derive::verify_solution(cs, sol);
  c.add("family solves system", testkit::in_chsh_family(sol) && report.pass(),
        std::to_string(cs.equations.size()) + " residuals zero");
  const auto ineq = derive::implied_inequality(derive::instantiate_f(a, sol), derive::instantiate_g(a, sol));
  const auto sq = derive::squared_form(ineq);
  const std::string text = sq ? sq->str() : "none";
  c.add("squared form", text == "(Q11 + Q12 + Q21 - Q22)^2 <= 4", text);
  derive::NumericOptions opts;
  opts.restarts = 100;
  const auto found = derive::solve_numeric(cs, opts);
  int members = 0;
  for (const auto& s : found.solutions) members += testkit::in_chsh_family(s.values) ? 1 : 0;
  c.add("numeric recovers member", members > 0,
        std::to_string(members) + " of " + std::to_string(found.solutions.size()) + " exact solutions");
}

void criterion3(Checks& c) {
  const Scenario s2(2, 2);
  const auto chsh = to_extended(catalog::chsh());
  const auto from_xyz = catalog::compose_xyz(ext_product(s2, {{0, 1}, {1, 1}}), ext_product(s2, {{0, 1}, {1, 2}}),
                                             ext_product(s2, {{0, 2}, {1, 1}}));
  c.add("compose CHSH", from_xyz == chsh);

  const Scenario s3(3, 2);
  const auto mabk3 = catalog::compose_xyz(ext_product(s3, {{0, 1}, {1, 1}, {2, 2}}),
                                          ext_product(s3, {{0, 1}, {1, 2}, {2, 1}}),
                                          ext_product(s3, {{0, 2}, {1, 1}, {2, 1}}));
  c.add("compose MABK3", mabk3 == to_extended(catalog::mabk(3)));
  c.add("mabk(2) = chsh", catalog::mabk(2) == catalog::chsh());
  bool s2_all = true;
  for (int n = 2; n <= 4; ++n) s2_all = s2_all && lhv::classify(catalog::mabk(n)) == lhv::SnClass::of(2);
  c.add("mabk S2 N=2..4", s2_all);

  const auto [i1, i2] = catalog::i1_i2();
  const auto sum = i1 + i2;
  // The constant halves add to 1: I1 + I2 <= 2 is CHSH <= 1.
  c.add("I1 + I2 = 1 + CHSH", sum == chsh + ExtendedPolynomial::constant(s2, 1) && !i1.is_computable(),
        "non-computable terms cancel");
  const auto roots = lhv::enumerate_roots(i1);
  bool pm1 = true;
  for (const auto& [r, n] : roots.entries) pm1 = pm1 && (r == Rational(1) || r == Rational(-1));
  c.add("roots(I1) in {-1,1}", pm1, spectrum_str(roots));
}

void criterion4(Checks& c) {
  const auto p = catalog::i33();
  c.add("class S3", lhv::classify(p) == lhv::SnClass::of(3));
  c.add("max 1", lhv::lhv_bound(p).max == Rational(1));
  const auto t = lhv::is_tight(p, 1);
  c.add("facet", t.is_facet && t.polytope_dim == 63,
        "rank " + std::to_string(t.affine_rank) + "/" + std::to_string(t.polytope_dim));
  const auto sub = substitute(p, {{{2, 1}, 1}, {{2, 2}, -1}, {{2, 3}, -1}});
  const auto r = find_relabeling(sub.polynomial, catalog::chsh(), true);
  c.add("substitution gives CHSH", r.has_value(), r ? r->str() : "no relabeling");
  const auto ghz = quantum::seesaw_settings(p, quantum::ghz(3, kPi / 4), defaults());
  c.add("GHZ value 2", std::abs(ghz.value - 2.0) <= 1e-4, fmt(ghz.value));
  const auto row = quantum::scan_ghz(p, {kPi / 12}, defaults()).front();
  c.add("xi=pi/12 value 1.0059", std::abs(row.value - 1.0059) <= 5e-3, fmt(row.value));
}

bool scan_exceeds_one(const BellPolynomial& p, std::string& detail) {
  const auto rows = quantum::scan_ghz(p, quantum::linspace(0.02, kPi / 2 - 0.02, 50), defaults());
  int above = 0;
  double worst = 1e9;
  double worst_xi = 0.0;
  for (const auto& r : rows) {
    above += r.value > 1.0 + kViolationMargin ? 1 : 0;
    if (r.value < worst) {
      worst = r.value;
      worst_xi = r.xi;
    }
  }
  detail = std::to_string(above) + "/50 above 1+1e-9, smallest excess " + fmt(worst - 1.0) + " at xi=" + fmt(worst_xi);
  return above == 50;
}

void criterion5(Checks& c) {
  int passing = 0;
  std::string detail;
  for (const auto& v : catalog::certify_i42_variants()) {
    passing += v.passes() ? 1 : 0;
    if (!detail.empty()) detail += ", ";
    detail += catalog::to_string(v.variant) + ":" + v.shifted_class.label() + "/max " + v.lhv_max.str() + "/rank " +
              std::to_string(v.tightness.affine_rank) + "of" + std::to_string(v.tightness.polytope_dim);
  }
  c.add("exactly one variant passes", passing == 1, std::to_string(passing) + " pass; " + detail);

  const auto p = catalog::i42(catalog::resolve_i42_canonical());
  const auto v = quantum::visibility_threshold(p, quantum::ghz(4, kPi / 4), defaults());
  c.add("I42 visibility 0.5784", std::abs(v.visibility - 0.5784) <= 2e-3, fmt(v.visibility));
  const auto m = quantum::visibility_threshold(catalog::mabk(4), quantum::ghz(4, kPi / 4), defaults());
  c.add("MABK4 visibility 0.35355", std::abs(m.visibility - 0.35355) <= 1e-3, fmt(m.visibility));
  std::string scan;
  c.add("scan > 1", scan_exceeds_one(p, scan), scan);
}

void criterion6(Checks& c) {
  const auto p = catalog::i42prime();
  c.add("shifted class S3", lhv::classify(shifted(p, Rational(6, 16), Rational(10, 16))) == lhv::SnClass::of(3));
  c.add("max 1", lhv::lhv_bound(p).max == Rational(1));
  const auto t = lhv::is_tight(p, 1);
  c.add("facet", t.is_facet, "rank " + std::to_string(t.affine_rank) + "/" + std::to_string(t.polytope_dim));
  std::string scan;
  c.add("scan > 1", scan_exceeds_one(p, scan), scan);
}

void criterion7(Checks& c) {
  const int cs_fail = testkit::cauchy_schwarz_failures(Scenario(2, 2), 500, 11) +
                      testkit::cauchy_schwarz_failures(Scenario(3, 2), 500, 12);
  c.add("Cauchy-Schwarz 1000 triples", cs_fail == 0, std::to_string(cs_fail) + " failures");

  std::vector<BellPolynomial> computable;
  for (const auto& e : catalog::entries()) {
    if (e.computable()) computable.push_back(e.bell());
  }

  double decrease = 0.0;
  double stationarity = 0.0;
  for (std::size_t i = 0; i < computable.size(); ++i) {
    const auto& p = computable[i];
    const auto psi = quantum::ghz(p.scenario().parties(), kPi / 4);
    decrease = std::max(decrease, testkit::seesaw_max_decrease(p, psi, 100 + i));
    decrease = std::max(decrease, testkit::global_seesaw_max_decrease(p, 200 + i));
    auto o = defaults(300 + i);
    o.restarts = 5;
    const auto r = quantum::seesaw_settings(p, psi, o);
    stationarity = std::max(stationarity, testkit::stationarity_error(p, psi, r.config));
  }
  c.add("monotone", decrease <= 1e-12, "max decrease " + fmt(decrease));
  c.add("stationary", stationarity <= 1e-8, fmt(stationarity));

  double grad = 0.0;
  const auto i33 = catalog::i33();
  for (int i = 0; i < 10; ++i) {
    const auto psi = quantum::haar_random_state(3, 400 + i);
    grad = std::max(grad, testkit::gradient_error(i33, psi, quantum::MeasurementConfig::random(i33.scenario(), 500 + i)));
  }
  c.add("gradient vs finite difference", grad <= 1e-6, fmt(grad));

  double excess = -1e9;
  for (std::size_t i = 0; i < computable.size(); ++i) {
    excess = std::max(excess, testkit::separable_excess(computable[i], 100, 600 + i));
  }
  c.add("separable <= LHV max", excess <= 1e-9, "max excess " + fmt(excess));

  double noise = 0.0;
  for (int n = 2; n <= 5; ++n) noise = std::max(noise, testkit::noise_max(Scenario(n, n <= 3 ? 3 : 2), 700 + n));
  c.add("noise nullity", noise <= 1e-12, fmt(noise));
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  std::function<void(Checks&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "CHSH suite", 1.0, criterion1},
      {2, "derivation suite", 10.0, criterion2},
      {3, "composition/recursion suite", 5.0, criterion3},
      {4, "I33 suite", 60.0, criterion4},
      {5, "I42 suite", 180.0, criterion5},
      {6, "I'42 suite", 180.0, criterion6},
      {7, "property suites", 600.0, criterion7},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::stoi(argv[i]));

  bool all_ok = true;
  for (const auto& cr : all) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), cr.id) == selected.end()) continue;
    Checks checks;
    const auto start = std::chrono::steady_clock::now();
    try {
      cr.run(checks);
    } catch (const std::exception& e) {
      checks.add("exception", false, e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    checks.add("runtime", seconds < cr.limit_seconds, fmt(seconds) + "s < " + fmt(cr.limit_seconds) + "s");
    std::cout << "criterion " << cr.id << " " << cr.name << ": " << (checks.ok() ? "PASS" : "FAIL") << "  ["
              << checks.text() << "]\n"
              << std::flush;
    all_ok = all_ok && checks.ok();
  }
  return all_ok ? 0 : 1;
}
