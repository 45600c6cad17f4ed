#pragma once

// Exact multilinear polynomials in dichotomic observables X_{j,k}.
//
// Conventions used throughout the library:
//   * parties are 0-based in the C++ API (printed 1-based);
//   * settings are 1-based, and setting 0 is the identity X_{j,0} = 1;
//   * every observable squares to one, so exponents are reduced mod 2.

#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bellforge/errors.hpp"
#include "bellforge/rational.hpp"

namespace bellforge {

class Scenario {
 public:
  static constexpr int kMaxSettings = 31;
  static constexpr int kMaxParties = 32;

  Scenario(int parties, int settings);

  int parties() const { return parties_; }
  int settings() const { return settings_; }
  int observables() const { return parties_ * settings_; }
  /// Number of computable non-identity monomials, (M+1)^N - 1.
  std::size_t correlation_dimension() const;

  friend bool operator==(const Scenario&, const Scenario&) = default;

 private:
  int parties_;
  int settings_;
};

void require_same_scenario(const Scenario& a, const Scenario& b);

struct Observable {
  int party;    // 0-based
  int setting;  // 1-based

  friend auto operator<=>(const Observable&, const Observable&) = default;
};

/// A deterministic local strategy: a +-1 value for every observable.
class Assignment {
 public:
  explicit Assignment(const Scenario& scenario);

  /// Bit (party * M + setting - 1) of `bits` set means X_{party,setting} = -1.
  static Assignment from_bits(const Scenario& scenario, std::uint64_t bits);

  const Scenario& scenario() const { return scenario_; }
  int value(int party, int setting) const;
  void set(int party, int setting, int value);
  /// Settings of `party` that take the value -1, as a bitmask (bit k-1).
  std::uint32_t minus_mask(int party) const { return minus_[party]; }
  std::uint64_t bits() const;

 private:
  Scenario scenario_;
  std::vector<std::uint32_t> minus_;
};

/// Product of observables with each party contributing a subset of its
/// settings. Ordering is lexicographic in the per-party masks, which for
/// computable monomials is lexicographic in the multi-index (k_1..k_N).
class Monomial {
 public:
  explicit Monomial(int parties) : masks_(parties, 0u) {}
  explicit Monomial(std::vector<std::uint32_t> masks) : masks_(std::move(masks)) {}

  /// Computable monomial from its multi-index; 0 marks the identity factor.
  static Monomial from_index(std::span<const int> index);
  static Monomial from_index(std::initializer_list<int> index) {
    return from_index(std::span<const int>(index.begin(), index.size()));
  }
  static Monomial observable(int parties, int party, int setting);

  int parties() const { return static_cast<int>(masks_.size()); }
  std::uint32_t mask(int party) const { return masks_[party]; }
  const std::vector<std::uint32_t>& masks() const { return masks_; }

  bool is_identity() const;
  bool is_computable() const;
  int degree() const;
  /// Multi-index (k_1..k_N); throws NonComputable for non-computable monomials.
  std::vector<int> index() const;
  /// +1 or -1: the value of this product on a deterministic assignment.
  int sign(const Assignment& a) const;

  friend Monomial operator*(const Monomial& a, const Monomial& b);
  friend auto operator<=>(const Monomial&, const Monomial&) = default;

  /// "X1,1 X2,2" style, or "1" for the identity.
  std::string str() const;
  /// "Q1120" style label; computable monomials only.
  std::string correlation_label() const;

 private:
  std::vector<std::uint32_t> masks_;
};

inline bool is_computable(const Monomial& m) { return m.is_computable(); }

/// Polynomial with exact rational coefficients. With ComputableOnly set,
/// every stored monomial has at most one setting per party (a Bell
/// function over correlation space); otherwise arbitrary products are
/// allowed (the extended algebra used while deriving inequalities).
template <bool ComputableOnly>
class Polynomial {
 public:
  using TermMap = std::map<Monomial, Rational>;

  explicit Polynomial(Scenario scenario) : scenario_(scenario) {}
  Polynomial(Scenario scenario, const TermMap& terms);

  static Polynomial constant(Scenario scenario, const Rational& value);
  static Polynomial observable(Scenario scenario, int party, int setting);
  static Polynomial monomial(Scenario scenario, const Monomial& m, const Rational& coefficient = 1);

  /// Adds `coefficient * m` in place (builder style).
  Polynomial& add(const Monomial& m, const Rational& coefficient);
  Polynomial& add(std::initializer_list<int> index, const Rational& coefficient) {
    return add(Monomial::from_index(index), coefficient);
  }

  const Scenario& scenario() const { return scenario_; }
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  Rational coefficient(const Monomial& m) const;
  Rational coefficient(std::initializer_list<int> index) const {
    return coefficient(Monomial::from_index(index));
  }
  Rational constant_term() const { return coefficient(Monomial(scenario_.parties())); }

  /// True when every term is computable.
  bool is_computable() const;

  Rational evaluate(const Assignment& a) const;

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Rational& s);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Rational& s) { return a *= s; }
  friend Polynomial operator*(const Rational& s, Polynomial a) { return a *= s; }
  friend bool operator==(const Polynomial&, const Polynomial&) = default;

  std::string str() const;

 private:
  Scenario scenario_;
  TermMap terms_;
};

using BellPolynomial = Polynomial<true>;
using ExtendedPolynomial = Polynomial<false>;

extern template class Polynomial<true>;
extern template class Polynomial<false>;

ExtendedPolynomial to_extended(const BellPolynomial& p);
/// Throws NonComputable when a non-computable term is present.
BellPolynomial to_bell(const ExtendedPolynomial& p);

/// Sum of coeffs[i] * polys[i]; all polynomials must share one scenario.
template <bool C>
Polynomial<C> linear_combine(std::span<const Rational> coeffs, std::span<const Polynomial<C>> polys);

BellPolynomial linear_combine(std::initializer_list<Rational> coeffs,
                              std::initializer_list<BellPolynomial> polys);
ExtendedPolynomial linear_combine(std::initializer_list<Rational> coeffs,
                                  std::initializer_list<ExtendedPolynomial> polys);

/// Product in the extended algebra with X^2 = 1 applied to every factor.
ExtendedPolynomial multiply(const ExtendedPolynomial& p, const ExtendedPolynomial& q);
inline ExtendedPolynomial operator*(const ExtendedPolynomial& p, const ExtendedPolynomial& q) {
  return multiply(p, q);
}

struct SubstitutionResult {
  BellPolynomial polynomial;
  /// new party -> original party
  std::vector<int> party_origin;
  /// [new party][new setting - 1] -> original setting
  std::vector<std::vector<int>> setting_origin;
};

/// Fixes the bound observables to +-1. Parties whose settings are all bound
/// are removed; bound settings (and, with drop_unused, settings the result
/// no longer mentions) are removed and the rest renumbered in order.
SubstitutionResult substitute(const BellPolynomial& p, const std::map<Observable, int>& bindings,
                              bool drop_unused = true);

/// Exchanges settings a and b for every party (the B -> B' map).
BellPolynomial swap_settings(const BellPolynomial& p, int a = 1, int b = 2);

/// Relabeling of observables: X_{j,k} -> sign * X_{party_to[j], setting_to[j][k-1]}.
struct Relabeling {
  std::vector<int> party_to;
  std::vector<std::vector<int>> setting_to;
  std::vector<std::vector<int>> sign;

  static Relabeling identity(const Scenario& s);
  std::string str() const;
  friend bool operator==(const Relabeling&, const Relabeling&) = default;
};

template <bool C>
Polynomial<C> apply_relabeling(const Polynomial<C>& p, const Relabeling& r);

/// Calls `visit` with every relabeling of the scenario (party permutations,
/// per-party setting permutations and, optionally, outcome flips) that maps
/// p onto q. Stops early when `visit` returns false.
void for_each_relabeling(const BellPolynomial& p, const BellPolynomial& q, bool with_flips,
                         const std::function<bool(const Relabeling&)>& visit);

std::optional<Relabeling> find_relabeling(const BellPolynomial& p, const BellPolynomial& q,
                                          bool with_flips = true);

}  // namespace bellforge
