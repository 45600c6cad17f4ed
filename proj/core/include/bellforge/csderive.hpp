#pragma once

// Bell inequalities from the Cauchy-Schwarz inequality
// <fg>^2 <= <f^2><g^2>: ansatz coefficients for f and g, the quadratic
// system that removes non-computable products, exact verification, a
// numeric solver, and the inequality implied by a solution.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bellforge/bellpoly.hpp"
#include "bellforge/lhvlab.hpp"
#include "bellforge/qviolation.hpp"

namespace bellforge::derive {

inline constexpr std::size_t kMaxExpansionMonomials = 256;
inline constexpr std::size_t kMaxNumericSymbols = 64;

/// Monomials sharing one coefficient symbol, each with a fixed multiplier.
struct SymbolClass {
  std::string name;
  std::vector<std::pair<Monomial, Rational>> members;
};

/// f = sum over classes of C<name> * members, g likewise with D<name>.
struct Ansatz {
  Scenario scenario;
  std::vector<SymbolClass> f_classes;
  std::vector<SymbolClass> g_classes;

  /// One symbol per computable monomial for both f and g, named by
  /// multi-index ("C00", "C12", ...).
  static Ansatz full(const Scenario& s);
  /// Symbol names, f symbols first.
  std::vector<std::string> symbols() const;
  std::size_t f_symbol_count() const { return f_classes.size(); }
  void validate() const;
};

using SymbolValues = std::map<std::string, Rational>;

/// Sum of coefficient * x_i * x_j over symbol index pairs with i <= j.
struct QuadraticForm {
  std::map<std::pair<std::size_t, std::size_t>, Rational> terms;

  Rational evaluate(std::span<const Rational> x) const;
  double evaluate(std::span<const double> x) const;
  std::string str(const std::vector<std::string>& symbols) const;
};

struct Equation {
  std::string product;  // "fg", "ff" or "gg"
  Monomial monomial;
  QuadraticForm form;
};

struct ConstraintSystem {
  Scenario scenario;
  std::vector<std::string> symbols;
  std::size_t f_symbols = 0;
  std::vector<Equation> equations;
};

ConstraintSystem build_constraints(const Ansatz& a);

struct ResidualReport {
  std::vector<Rational> residuals;

  bool pass() const;
};

/// Throws InvalidArgument when a symbol has no value.
ResidualReport verify_solution(const ConstraintSystem& cs, const SymbolValues& values);

ExtendedPolynomial instantiate_f(const Ansatz& a, const SymbolValues& values);
ExtendedPolynomial instantiate_g(const Ansatz& a, const SymbolValues& values);

/// <P_fg>^2 <= <P_ff> <P_gg>, each P affine on correlation space.
struct ImpliedInequality {
  BellPolynomial fg;
  BellPolynomial ff;
  BellPolynomial gg;

  /// <P_ff><P_gg> - <P_fg>^2 at a deterministic assignment.
  Rational slack(const Assignment& a) const;
  /// Same for a finite LHV mixture; nonnegative by construction.
  Rational slack(std::span<const lhv::WeightedAssignment> mixture) const;
  std::string str() const;
};

/// Throws NonComputable when a non-computable term survives in fg, f^2 or g^2.
ImpliedInequality implied_inequality(const ExtendedPolynomial& f, const ExtendedPolynomial& g);

/// <L>^2 <= bound with L a primitive integer form.
struct SquaredForm {
  BellPolynomial linear;
  Rational bound;

  std::string str() const;
};

/// Available when P_fg is constant and P_ff + P_gg is constant.
std::optional<SquaredForm> squared_form(const ImpliedInequality& ineq);

/// |<L>| <= r with r rational; available when the bound is a rational square.
struct LinearForm {
  BellPolynomial linear;
  Rational bound;

  std::string str() const;
};

std::optional<LinearForm> linearize(const SquaredForm& sq);

struct TheoremResult {
  bool certified = false;
  lhv::SnClass sn_class = lhv::SnClass::unclassified();
  lhv::RootSpectrum spectrum;
  BellPolynomial function;

  /// "|<B>| <= 1" when certified.
  std::string str() const;
};

/// |<B>| <= 1 when B is in some S_n; otherwise rejected with its spectrum.
TheoremResult theorem_bound(const BellPolynomial& b);

/// Best rational approximation with denominator <= max_denominator.
Rational rationalize(double x, std::int64_t max_denominator);

struct NumericOptions {
  std::uint64_t seed = 1;
  int restarts = 100;
  double residual_tol = 1e-10;
  std::int64_t max_denominator = 64;
  int max_iterations = 500;
};

struct NumericSolution {
  SymbolValues values;
  double residual;  // float residual norm before snapping
  std::uint64_t seed;
};

struct NumericSolveResult {
  std::vector<NumericSolution> solutions;  // exactly verified, deduplicated
  double best_residual = 0.0;
  int restarts_used = 0;
};

/// Levenberg-Marquardt from random unit-norm starts. Each nonempty block
/// (f, g) is kept on the unit sphere during the search and rescaled so its
/// largest entry is 1 before snapping. Only snapped points that pass
/// verify_solution are reported.
NumericSolveResult solve_numeric(const ConstraintSystem& cs, const NumericOptions& options = {});

/// Exact check of <fg>^2 <= <f^2><g^2> over a mixture.
bool cauchy_schwarz_property(const ExtendedPolynomial& f, const ExtendedPolynomial& g,
                             std::span<const lhv::WeightedAssignment> mixture);

struct TrivialityReport {
  double quantum_value = 0.0;
  double spread = 0.0;
  int restarts_used = 0;
  bool trivial = false;
};

/// Advisory: flags an inequality whose optimized quantum value never
/// exceeds `bound` by more than `threshold`.
TrivialityReport triviality(const BellPolynomial& p, const Rational& bound, const quantum::SeesawOptions& options,
                            double threshold = 1e-7);

}  // namespace bellforge::derive
