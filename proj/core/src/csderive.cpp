#include "bellforge/csderive.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "bellforge/random.hpp"

namespace bellforge::derive {

namespace {

std::string index_name(const Monomial& m, int settings) {
  std::string out;
  for (int k : m.index()) {
    if (settings > 9 && !out.empty()) out += '.';
    out += std::to_string(k);
  }
  return out;
}

ExtendedPolynomial class_polynomial(const Scenario& s, const SymbolClass& c) {
  ExtendedPolynomial p(s);
  for (const auto& [m, mult] : c.members) p.add(m, mult);
  return p;
}

std::vector<ExtendedPolynomial> class_polynomials(const Scenario& s, const std::vector<SymbolClass>& classes) {
  std::vector<ExtendedPolynomial> out;
  out.reserve(classes.size());
  for (const auto& c : classes) out.push_back(class_polynomial(s, c));
  return out;
}

ExtendedPolynomial instantiate(const Scenario& s, const std::vector<SymbolClass>& classes, char prefix,
                               const SymbolValues& values) {
  ExtendedPolynomial out(s);
  for (const auto& c : classes) {
    const std::string name = prefix + c.name;
    auto it = values.find(name);
    if (it == values.end()) throw InvalidArgument("no value for symbol " + name);
    out += it->second * class_polynomial(s, c);
  }
  return out;
}

void validate_classes(const Scenario& s, const std::vector<SymbolClass>& classes, const char* which) {
  std::set<std::string> names;
  std::set<Monomial> seen;
  for (const auto& c : classes) {
    if (c.name.empty()) throw InvalidArgument(std::string(which) + ": empty class name");
    if (!names.insert(c.name).second) throw InvalidArgument(std::string(which) + ": duplicate class " + c.name);
    if (c.members.empty()) throw InvalidArgument(std::string(which) + ": class " + c.name + " has no members");
    for (const auto& [m, mult] : c.members) {
      if (m.parties() != s.parties()) throw ScenarioMismatch("ansatz monomial has the wrong party count");
      for (int j = 0; j < m.parties(); ++j) {
        if (m.mask(j) >> s.settings()) throw InvalidArgument("ansatz monomial uses an unknown setting");
      }
      if (!m.is_computable()) throw NonComputable("ansatz monomial " + m.str() + " is not computable");
      if (mult.is_zero()) throw InvalidArgument("ansatz multiplier must be nonzero");
      if (!seen.insert(m).second) {
        throw InvalidArgument(std::string(which) + ": monomial " + m.str() + " appears in two classes");
      }
    }
  }
}

// Adds coefficient * x_i * x_j for every non-computable monomial of a * b.
void accumulate(std::map<Monomial, QuadraticForm>& forms, const ExtendedPolynomial& a, const ExtendedPolynomial& b,
                std::size_t i, std::size_t j, const Rational& weight) {
  const auto key = std::minmax(i, j);
  const ExtendedPolynomial product = multiply(a, b);
  for (const auto& [m, c] : product.terms()) {
    if (m.is_computable()) continue;
    forms[m].terms[{key.first, key.second}] += weight * c;
  }
}

void append_equations(std::vector<Equation>& out, const char* product, std::map<Monomial, QuadraticForm>& forms) {
  for (auto& [m, form] : forms) {
    std::erase_if(form.terms, [](const auto& t) { return t.second.is_zero(); });
    if (!form.terms.empty()) out.push_back({product, m, std::move(form)});
  }
}

bool is_constant(const BellPolynomial& p) {
  return std::all_of(p.terms().begin(), p.terms().end(), [](const auto& t) { return t.first.is_identity(); });
}

std::optional<std::int64_t> exact_sqrt(std::int64_t v) {
  if (v < 0) return std::nullopt;
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(v)));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  if (r * r != v) return std::nullopt;
  return r;
}

// Writes L = s * L' with L' integer, coprime and first coefficient positive.
std::pair<BellPolynomial, Rational> primitive(const BellPolynomial& l) {
  Rational g;
  bool first = true;
  for (const auto& [m, c] : l.terms()) {
    const auto num = c.abs().small_numerator();
    const auto den = c.small_denominator();
    if (!num || !den) throw TooLarge("coefficients exceed the primitive-form range");
    if (first) {
      g = Rational(*num, *den);
      first = false;
    } else {
      const auto gn = *g.small_numerator();
      const auto gd = *g.small_denominator();
      g = Rational(std::gcd(gn, *num), std::lcm(gd, *den));
    }
  }
  if (l.terms().begin()->second.sign() < 0) g = -g;
  return {Rational(1) / g * l, g};
}

double residual_norm(const ConstraintSystem& cs, const std::vector<double>& x) {
  double s = 0.0;
  for (const auto& e : cs.equations) {
    const double r = e.form.evaluate(std::span<const double>(x));
    s += r * r;
  }
  return std::sqrt(s);
}

struct Block {
  std::size_t begin;
  std::size_t end;
};

// Equation residuals followed by one unit-norm residual per nonempty block.
Eigen::VectorXd residuals(const ConstraintSystem& cs, const std::vector<Block>& blocks, const Eigen::VectorXd& x) {
  const std::vector<double> xs(x.data(), x.data() + x.size());
  Eigen::VectorXd r(static_cast<Eigen::Index>(cs.equations.size() + blocks.size()));
  Eigen::Index row = 0;
  for (const auto& e : cs.equations) r[row++] = e.form.evaluate(std::span<const double>(xs));
  for (const auto& b : blocks) {
    double s = -1.0;
    for (std::size_t i = b.begin; i < b.end; ++i) s += x[static_cast<Eigen::Index>(i)] * x[static_cast<Eigen::Index>(i)];
    r[row++] = s;
  }
  return r;
}

Eigen::MatrixXd jacobian(const ConstraintSystem& cs, const std::vector<Block>& blocks, const Eigen::VectorXd& x) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(cs.equations.size() + blocks.size()), x.size());
  Eigen::Index row = 0;
  for (const auto& e : cs.equations) {
    for (const auto& [ij, c] : e.form.terms) {
      const double cv = c.to_double();
      const auto a = static_cast<Eigen::Index>(ij.first);
      const auto b = static_cast<Eigen::Index>(ij.second);
      if (a == b) {
        j(row, a) += 2.0 * cv * x[a];
      } else {
        j(row, a) += cv * x[b];
        j(row, b) += cv * x[a];
      }
    }
    ++row;
  }
  for (const auto& b : blocks) {
    for (std::size_t i = b.begin; i < b.end; ++i) {
      j(row, static_cast<Eigen::Index>(i)) = 2.0 * x[static_cast<Eigen::Index>(i)];
    }
    ++row;
  }
  return j;
}

Eigen::VectorXd levenberg_marquardt(const ConstraintSystem& cs, const std::vector<Block>& blocks, Eigen::VectorXd x,
                                    int max_iterations) {
  double lambda = 1e-3;
  Eigen::VectorXd r = residuals(cs, blocks, x);
  double cost = r.squaredNorm();
  for (int it = 0; it < max_iterations && cost > 1e-30 && lambda < 1e12; ++it) {
    const Eigen::MatrixXd j = jacobian(cs, blocks, x);
    Eigen::MatrixXd a = j.transpose() * j;
    const Eigen::VectorXd g = j.transpose() * r;
    a.diagonal().array() += lambda * (1.0 + a.diagonal().array());
    const Eigen::VectorXd step = a.ldlt().solve(-g);
    const Eigen::VectorXd trial = x + step;
    const Eigen::VectorXd rt = residuals(cs, blocks, trial);
    const double trial_cost = rt.squaredNorm();
    if (trial_cost < cost) {
      x = trial;
      r = rt;
      cost = trial_cost;
      lambda = std::max(lambda / 3.0, 1e-12);
    } else {
      lambda *= 4.0;
    }
  }
  return x;
}

}  // namespace

Ansatz Ansatz::full(const Scenario& s) {
  Ansatz a{s, {}, {}};
  std::vector<Monomial> basis{Monomial(s.parties())};
  for (auto& m : lhv::correlation_basis(s)) basis.push_back(std::move(m));
  for (const auto& m : basis) {
    const std::string name = index_name(m, s.settings());
    a.f_classes.push_back({name, {{m, Rational(1)}}});
    a.g_classes.push_back({name, {{m, Rational(1)}}});
  }
  return a;
}

std::vector<std::string> Ansatz::symbols() const {
  std::vector<std::string> out;
  for (const auto& c : f_classes) out.push_back("C" + c.name);
  for (const auto& c : g_classes) out.push_back("D" + c.name);
  return out;
}

void Ansatz::validate() const {
  validate_classes(scenario, f_classes, "f");
  validate_classes(scenario, g_classes, "g");
}

Rational QuadraticForm::evaluate(std::span<const Rational> x) const {
  Rational s;
  for (const auto& [ij, c] : terms) s += c * x[ij.first] * x[ij.second];
  return s;
}

double QuadraticForm::evaluate(std::span<const double> x) const {
  double s = 0.0;
  for (const auto& [ij, c] : terms) s += c.to_double() * x[ij.first] * x[ij.second];
  return s;
}

std::string QuadraticForm::str(const std::vector<std::string>& symbols) const {
  std::ostringstream out;
  bool first = true;
  for (const auto& [ij, c] : terms) {
    const bool negative = c.sign() < 0;
    if (first) {
      if (negative) out << "-";
    } else {
      out << (negative ? " - " : " + ");
    }
    first = false;
    const Rational mag = c.abs();
    if (mag != Rational(1)) out << mag << " ";
    if (ij.first == ij.second) {
      out << symbols[ij.first] << "^2";
    } else {
      out << symbols[ij.first] << " " << symbols[ij.second];
    }
  }
  if (first) out << "0";
  return out.str();
}

ConstraintSystem build_constraints(const Ansatz& a) {
  a.validate();
  const Scenario& s = a.scenario;
  std::size_t total = 1;
  for (int j = 0; j < s.parties(); ++j) {
    total *= static_cast<std::size_t>(s.settings() + 1);
    if (total > kMaxExpansionMonomials) {
      throw TooLarge("(M+1)^N exceeds " + std::to_string(kMaxExpansionMonomials) + " for symbolic expansion");
    }
  }
  ConstraintSystem cs{s, a.symbols(), a.f_symbol_count(), {}};
  const auto f = class_polynomials(s, a.f_classes);
  const auto g = class_polynomials(s, a.g_classes);
  const std::size_t nf = f.size();

  std::map<Monomial, QuadraticForm> fg, ff, gg;
  for (std::size_t i = 0; i < f.size(); ++i) {
    for (std::size_t j = 0; j < g.size(); ++j) accumulate(fg, f[i], g[j], i, nf + j, 1);
  }
  for (std::size_t i = 0; i < f.size(); ++i) {
    for (std::size_t j = i; j < f.size(); ++j) accumulate(ff, f[i], f[j], i, j, i == j ? 1 : 2);
  }
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = i; j < g.size(); ++j) accumulate(gg, g[i], g[j], nf + i, nf + j, i == j ? 1 : 2);
  }
  append_equations(cs.equations, "fg", fg);
  append_equations(cs.equations, "ff", ff);
  append_equations(cs.equations, "gg", gg);
  return cs;
}

bool ResidualReport::pass() const {
  return std::all_of(residuals.begin(), residuals.end(), [](const Rational& r) { return r.is_zero(); });
}

ResidualReport verify_solution(const ConstraintSystem& cs, const SymbolValues& values) {
  std::vector<Rational> x;
  x.reserve(cs.symbols.size());
  for (const auto& name : cs.symbols) {
    auto it = values.find(name);
    if (it == values.end()) throw InvalidArgument("no value for symbol " + name);
    x.push_back(it->second);
  }
  ResidualReport report;
  for (const auto& e : cs.equations) report.residuals.push_back(e.form.evaluate(std::span<const Rational>(x)));
  return report;
}

ExtendedPolynomial instantiate_f(const Ansatz& a, const SymbolValues& values) {
  return instantiate(a.scenario, a.f_classes, 'C', values);
}

ExtendedPolynomial instantiate_g(const Ansatz& a, const SymbolValues& values) {
  return instantiate(a.scenario, a.g_classes, 'D', values);
}

Rational ImpliedInequality::slack(const Assignment& a) const {
  const Rational v = fg.evaluate(a);
  return ff.evaluate(a) * gg.evaluate(a) - v * v;
}

Rational ImpliedInequality::slack(std::span<const lhv::WeightedAssignment> mixture) const {
  const Rational v = lhv::lhv_expectation(fg, mixture);
  return lhv::lhv_expectation(ff, mixture) * lhv::lhv_expectation(gg, mixture) - v * v;
}

std::string ImpliedInequality::str() const {
  return "<" + fg.str() + ">^2 <= <" + ff.str() + "> <" + gg.str() + ">";
}

ImpliedInequality implied_inequality(const ExtendedPolynomial& f, const ExtendedPolynomial& g) {
  require_same_scenario(f.scenario(), g.scenario());
  return {to_bell(multiply(f, g)), to_bell(multiply(f, f)), to_bell(multiply(g, g))};
}

namespace {

std::string correlation_str(const BellPolynomial& p) {
  std::ostringstream out;
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    const bool negative = c.sign() < 0;
    if (first) {
      if (negative) out << "-";
    } else {
      out << (negative ? " - " : " + ");
    }
    first = false;
    const Rational mag = c.abs();
    if (m.is_identity()) {
      out << mag;
      continue;
    }
    if (mag != Rational(1)) out << mag << " ";
    out << m.correlation_label();
  }
  if (first) out << "0";
  return out.str();
}

}  // namespace

std::string SquaredForm::str() const { return "(" + correlation_str(linear) + ")^2 <= " + bound.str(); }

std::string LinearForm::str() const { return "|" + correlation_str(linear) + "| <= " + bound.str(); }

std::optional<SquaredForm> squared_form(const ImpliedInequality& ineq) {
  if (!is_constant(ineq.fg)) return std::nullopt;
  const BellPolynomial sum = ineq.ff + ineq.gg;
  if (!is_constant(sum)) return std::nullopt;
  const Rational a = sum.constant_term() / Rational(2);
  const Rational c = ineq.fg.constant_term();
  const BellPolynomial l = Rational(1, 2) * (ineq.ff - ineq.gg);
  if (l.is_zero()) return std::nullopt;
  const auto [lp, scale] = primitive(l);
  return SquaredForm{lp, (a * a - c * c) / (scale * scale)};
}

std::optional<LinearForm> linearize(const SquaredForm& sq) {
  if (sq.bound.sign() < 0) return std::nullopt;
  const auto num = sq.bound.small_numerator();
  const auto den = sq.bound.small_denominator();
  if (!num || !den) return std::nullopt;
  const auto rn = exact_sqrt(*num);
  const auto rd = exact_sqrt(*den);
  if (!rn || !rd) return std::nullopt;
  return LinearForm{sq.linear, Rational(*rn, *rd)};
}

std::string TheoremResult::str() const {
  if (certified) return "|<" + function.str() + ">| <= 1  (" + sn_class.label() + ")";
  std::ostringstream out;
  out << "rejected: roots";
  for (const auto& [r, n] : spectrum.entries) out << " " << r << ":" << n;
  return out.str();
}

TheoremResult theorem_bound(const BellPolynomial& b) {
  TheoremResult r{false, lhv::SnClass::unclassified(), lhv::enumerate_roots(b), b};
  r.sn_class = lhv::classify(r.spectrum);
  r.certified = r.sn_class.classified();
  return r;
}

Rational rationalize(double x, std::int64_t max_denominator) {
  if (!std::isfinite(x)) throw InvalidArgument("cannot rationalize a non-finite value");
  if (max_denominator < 1) throw InvalidArgument("max_denominator must be positive");
  if (std::abs(x) > 1e15) throw InvalidArgument("value too large to rationalize");
  const bool negative = x < 0;
  double y = std::abs(x);
  // Convergents h/k of the continued fraction, with semiconvergent check.
  std::int64_t h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double rest = y;
  for (int iter = 0; iter < 64; ++iter) {
    const double fl = std::floor(rest);
    const auto a = static_cast<std::int64_t>(fl);
    const std::int64_t k2 = a * k1 + k0;
    if (k2 > max_denominator) {
      const std::int64_t t = k1 == 0 ? 0 : (max_denominator - k0) / k1;
      const std::int64_t hs = t * h1 + h0;
      const std::int64_t ks = t * k1 + k0;
      if (ks > 0 && k1 > 0 &&
          std::abs(y - static_cast<double>(hs) / ks) < std::abs(y - static_cast<double>(h1) / k1)) {
        h1 = hs;
        k1 = ks;
      }
      break;
    }
    const std::int64_t h2 = a * h1 + h0;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    const double frac = rest - fl;
    if (frac < 1e-12 || std::abs(y - static_cast<double>(h1) / k1) < 1e-15) break;
    rest = 1.0 / frac;
  }
  const Rational r(h1, k1);
  return negative ? -r : r;
}

NumericSolveResult solve_numeric(const ConstraintSystem& cs, const NumericOptions& options) {
  const std::size_t n = cs.symbols.size();
  if (n > kMaxNumericSymbols) throw TooLarge("numeric solving supports at most 64 symbols");
  if (options.restarts < 1) throw InvalidArgument("restarts must be positive");
  NumericSolveResult out;
  if (cs.equations.empty()) {
    NumericSolution zero{{}, 0.0, options.seed};
    for (const auto& s : cs.symbols) zero.values[s] = Rational(0);
    out.solutions.push_back(std::move(zero));
    out.restarts_used = 0;
    return out;
  }
  std::vector<Block> blocks;
  if (cs.f_symbols > 0) blocks.push_back({0, cs.f_symbols});
  if (cs.f_symbols < n) blocks.push_back({cs.f_symbols, n});

  out.best_residual = std::numeric_limits<double>::infinity();
  std::set<SymbolValues> seen;
  for (int r = 0; r < options.restarts; ++r) {
    const std::uint64_t seed = derive_seed(options.seed, static_cast<std::uint64_t>(r));
    Rng rng(seed);
    Eigen::VectorXd x(static_cast<Eigen::Index>(n));
    for (auto& v : x) v = rng.normal();
    for (const auto& b : blocks) {
      auto seg = x.segment(static_cast<Eigen::Index>(b.begin), static_cast<Eigen::Index>(b.end - b.begin));
      seg /= seg.norm();
    }
    x = levenberg_marquardt(cs, blocks, x, options.max_iterations);
    std::vector<double> xs(x.data(), x.data() + x.size());
    const double res = residual_norm(cs, xs);
    out.best_residual = std::min(out.best_residual, res);
    ++out.restarts_used;
    if (!(res < options.residual_tol)) continue;

    // Bi-homogeneous system: rescale each block so its first largest entry is 1.
    for (const auto& b : blocks) {
      double m = 0.0;
      for (std::size_t i = b.begin; i < b.end; ++i) m = std::max(m, std::abs(xs[i]));
      if (m == 0.0) continue;
      std::size_t pivot = b.begin;
      while (std::abs(xs[pivot]) < m * (1.0 - 1e-9)) ++pivot;
      const double scale = xs[pivot];
      for (std::size_t i = b.begin; i < b.end; ++i) xs[i] /= scale;
    }
    NumericSolution sol{{}, res, seed};
    for (std::size_t i = 0; i < n; ++i) sol.values[cs.symbols[i]] = rationalize(xs[i], options.max_denominator);
    if (!verify_solution(cs, sol.values).pass()) continue;
    if (!seen.insert(sol.values).second) continue;
    out.solutions.push_back(std::move(sol));
  }
  std::stable_sort(out.solutions.begin(), out.solutions.end(), [](const auto& a, const auto& b) {
    return a.residual != b.residual ? a.residual < b.residual : a.seed < b.seed;
  });
  return out;
}

bool cauchy_schwarz_property(const ExtendedPolynomial& f, const ExtendedPolynomial& g,
                             std::span<const lhv::WeightedAssignment> mixture) {
  require_same_scenario(f.scenario(), g.scenario());
  const Rational fg = lhv::lhv_expectation(multiply(f, g), mixture);
  const Rational ff = lhv::lhv_expectation(multiply(f, f), mixture);
  const Rational gg = lhv::lhv_expectation(multiply(g, g), mixture);
  return fg * fg <= ff * gg;
}

TrivialityReport triviality(const BellPolynomial& p, const Rational& bound, const quantum::SeesawOptions& options,
                            double threshold) {
  const quantum::OptimizationResult r = quantum::seesaw_global(p, options);
  return {r.value, r.spread, r.restarts_used, r.value <= bound.to_double() + threshold};
}

}  // namespace bellforge::derive
