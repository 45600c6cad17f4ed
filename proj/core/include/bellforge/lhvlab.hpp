#pragma once

// Exhaustive analysis over deterministic local strategies: root spectra,
// S_n classification, exact classical bounds and facet certification.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bellforge/bellpoly.hpp"

namespace bellforge::lhv {

inline constexpr std::uint64_t kDefaultEnumerationLimit = std::uint64_t(1) << 24;
inline constexpr int kDefaultMaxClass = 64;

/// Cap on 2^(N*M); BELLFORGE_MAX_ENUM overrides the default of 2^24.
std::uint64_t enumeration_limit();
void require_enumerable(const Scenario& s);

/// Calls visit(bits, value) for every deterministic assignment. Values are
/// integers over the common denominator of p's coefficients, which is
/// returned. Assignments are visited in Gray-code order.
std::int64_t for_each_root(const ExtendedPolynomial& p,
                           const std::function<void(std::uint64_t bits, std::int64_t scaled_value)>& visit);

struct RootSpectrum {
  std::map<Rational, std::uint64_t> entries;
  std::uint64_t total = 0;

  std::vector<Rational> distinct() const;
  std::uint64_t multiplicity(const Rational& root) const;
  friend bool operator==(const RootSpectrum&, const RootSpectrum&) = default;
};

RootSpectrum enumerate_roots(const ExtendedPolynomial& p);
RootSpectrum enumerate_roots(const BellPolynomial& p);
/// Reference evaluator: evaluates every assignment from scratch.
RootSpectrum enumerate_roots_naive(const ExtendedPolynomial& p);

/// Membership in S_n: every distinct root lies on -1 + 2j/(n-1).
class SnClass {
 public:
  static SnClass unclassified() { return SnClass(0); }
  static SnClass of(int n);

  bool classified() const { return n_ >= 2; }
  int n() const { return n_; }
  std::vector<Rational> grid() const;
  std::string label() const;

  friend bool operator==(const SnClass&, const SnClass&) = default;

 private:
  explicit SnClass(int n) : n_(n) {}
  int n_;
};

bool on_grid(const Rational& root, int n);
SnClass classify(const RootSpectrum& spectrum, int n_max = kDefaultMaxClass);
SnClass classify(const ExtendedPolynomial& p, int n_max = kDefaultMaxClass);
SnClass classify(const BellPolynomial& p, int n_max = kDefaultMaxClass);

struct LhvBound {
  Rational min;
  Rational max;
};

LhvBound lhv_bound(const ExtendedPolynomial& p);
LhvBound lhv_bound(const BellPolynomial& p);

/// Computable non-identity monomials of a scenario in canonical order.
std::vector<Monomial> correlation_basis(const Scenario& s);

struct CorrelationVector {
  Scenario scenario;
  std::vector<Monomial> basis;
  std::vector<Rational> coordinates;

  Rational at(const Monomial& m) const;
};

CorrelationVector vertex_vector(const Assignment& a);

/// Affine dimension of the local correlation polytope, by exact rank.
int polytope_dimension(const Scenario& s);

struct TightnessReport {
  bool valid = false;
  Rational bound;
  Rational lhv_max;
  std::uint64_t saturating_count = 0;
  /// Affine rank of the saturating vertices; this many plus one of them
  /// are affinely independent.
  int affine_rank = -1;
  int polytope_dim = 0;
  bool is_facet = false;

  std::uint64_t independent_saturating() const { return affine_rank < 0 ? 0 : affine_rank + 1; }
};

TightnessReport is_tight(const BellPolynomial& p, const Rational& bound);

struct WeightedAssignment {
  Rational weight;
  Assignment assignment;
};

/// Expectation under a finite LHV mixture; weights must be >= 0 and sum to 1.
Rational lhv_expectation(const ExtendedPolynomial& p, std::span<const WeightedAssignment> mixture);
Rational lhv_expectation(const BellPolynomial& p, std::span<const WeightedAssignment> mixture);

/// Relabelings (party and setting permutations, optionally outcome flips)
/// that leave p unchanged.
std::vector<Relabeling> invariance_group(const BellPolynomial& p, bool with_flips = false);

}  // namespace bellforge::lhv
