#include "bellforge/lhvlab.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <numeric>
#include <optional>

#include "bellforge/exact_rank.hpp"

namespace bellforge::lhv {

std::uint64_t enumeration_limit() {
  if (const char* env = std::getenv("BELLFORGE_MAX_ENUM")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return kDefaultEnumerationLimit;
}

void require_enumerable(const Scenario& s) {
  const int bits = s.observables();
  const std::uint64_t limit = enumeration_limit();
  if (bits >= 63 || (std::uint64_t(1) << bits) > limit) {
    throw TooLarge("2^" + std::to_string(bits) + " assignments exceed the enumeration limit " +
                   std::to_string(limit));
  }
}

namespace {

struct IntegerForm {
  std::int64_t denominator = 1;
  std::vector<std::int64_t> coefficients;
  std::vector<std::uint64_t> observable_masks;  // per term, bit j*M+k-1
};

// Scales p to integer coefficients over a common denominator; empty when
// any scaled quantity would leave int64.
std::optional<IntegerForm> integer_form(const ExtendedPolynomial& p) {
  IntegerForm f;
  const int m = p.scenario().settings();
  for (const auto& [mono, c] : p.terms()) {
    const auto d = c.small_denominator();
    if (!d) return std::nullopt;
    const std::int64_t g = std::gcd(f.denominator, *d);
    std::int64_t l;
    if (__builtin_mul_overflow(f.denominator / g, *d, &l)) return std::nullopt;
    f.denominator = l;
  }
  std::int64_t abs_sum = 0;
  for (const auto& [mono, c] : p.terms()) {
    const Rational scaled = c * Rational(f.denominator);
    const auto n = scaled.small_numerator();
    if (!n || *n == std::numeric_limits<std::int64_t>::min()) return std::nullopt;
    std::int64_t twice;
    if (__builtin_mul_overflow(*n < 0 ? -*n : *n, 2, &twice)) return std::nullopt;
    if (__builtin_add_overflow(abs_sum, twice, &abs_sum)) return std::nullopt;
    f.coefficients.push_back(*n);
    std::uint64_t bits = 0;
    for (int j = 0; j < mono.parties(); ++j) bits |= std::uint64_t(mono.mask(j)) << (j * m);
    f.observable_masks.push_back(bits);
  }
  return f;
}

}  // namespace

std::int64_t for_each_root(const ExtendedPolynomial& p,
                           const std::function<void(std::uint64_t, std::int64_t)>& visit) {
  require_enumerable(p.scenario());
  const auto form = integer_form(p);
  if (!form) throw TooLarge("coefficients do not fit the integer enumeration path");

  const int nbits = p.scenario().observables();
  std::vector<std::vector<std::size_t>> touching(nbits);
  for (std::size_t t = 0; t < form->coefficients.size(); ++t) {
    for (int b = 0; b < nbits; ++b) {
      if ((form->observable_masks[t] >> b) & 1u) touching[b].push_back(t);
    }
  }
  std::vector<std::int8_t> sign(form->coefficients.size(), 1);
  std::int64_t value = 0;
  for (auto c : form->coefficients) value += c;

  const std::uint64_t count = std::uint64_t(1) << nbits;
  std::uint64_t gray = 0;
  visit(gray, value);
  for (std::uint64_t i = 1; i < count; ++i) {
    const int b = std::countr_zero(i);
    gray ^= std::uint64_t(1) << b;
    for (auto t : touching[b]) {
      value -= 2 * sign[t] * form->coefficients[t];
      sign[t] = static_cast<std::int8_t>(-sign[t]);
    }
    visit(gray, value);
  }
  return form->denominator;
}

std::vector<Rational> RootSpectrum::distinct() const {
  std::vector<Rational> out;
  out.reserve(entries.size());
  for (const auto& [r, n] : entries) out.push_back(r);
  return out;
}

std::uint64_t RootSpectrum::multiplicity(const Rational& root) const {
  auto it = entries.find(root);
  return it == entries.end() ? 0 : it->second;
}

RootSpectrum enumerate_roots_naive(const ExtendedPolynomial& p) {
  require_enumerable(p.scenario());
  RootSpectrum s;
  const std::uint64_t count = std::uint64_t(1) << p.scenario().observables();
  for (std::uint64_t bits = 0; bits < count; ++bits) {
    ++s.entries[p.evaluate(Assignment::from_bits(p.scenario(), bits))];
  }
  s.total = count;
  return s;
}

RootSpectrum enumerate_roots(const ExtendedPolynomial& p) {
  require_enumerable(p.scenario());
  if (!integer_form(p)) return enumerate_roots_naive(p);
  std::map<std::int64_t, std::uint64_t> scaled;
  const std::int64_t den = for_each_root(p, [&](std::uint64_t, std::int64_t v) { ++scaled[v]; });
  RootSpectrum s;
  for (const auto& [v, n] : scaled) s.entries.emplace(Rational(v, den), n);
  s.total = std::uint64_t(1) << p.scenario().observables();
  return s;
}

RootSpectrum enumerate_roots(const BellPolynomial& p) { return enumerate_roots(to_extended(p)); }

SnClass SnClass::of(int n) {
  if (n < 2) throw InvalidArgument("S_n needs n >= 2");
  return SnClass(n);
}

std::vector<Rational> SnClass::grid() const {
  std::vector<Rational> g;
  if (!classified()) return g;
  for (int j = 0; j < n_; ++j) g.push_back(Rational(-1) + Rational(2 * j, n_ - 1));
  return g;
}

std::string SnClass::label() const { return classified() ? "S" + std::to_string(n_) : "Unclassified"; }

bool on_grid(const Rational& root, int n) {
  const Rational pos = (root + Rational(1)) * Rational(n - 1, 2);
  return pos.is_integer() && pos.sign() >= 0 && pos <= Rational(n - 1);
}

SnClass classify(const RootSpectrum& spectrum, int n_max) {
  for (int n = 2; n <= n_max; ++n) {
    const bool fits = std::all_of(spectrum.entries.begin(), spectrum.entries.end(),
                                  [n](const auto& e) { return on_grid(e.first, n); });
    if (fits) return SnClass::of(n);
  }
  return SnClass::unclassified();
}

SnClass classify(const ExtendedPolynomial& p, int n_max) { return classify(enumerate_roots(p), n_max); }
SnClass classify(const BellPolynomial& p, int n_max) { return classify(enumerate_roots(p), n_max); }

LhvBound lhv_bound(const ExtendedPolynomial& p) {
  const RootSpectrum s = enumerate_roots(p);
  return {s.entries.begin()->first, s.entries.rbegin()->first};
}

LhvBound lhv_bound(const BellPolynomial& p) { return lhv_bound(to_extended(p)); }

std::vector<Monomial> correlation_basis(const Scenario& s) {
  std::vector<Monomial> basis;
  std::vector<int> idx(s.parties(), 0);
  while (true) {
    // Odometer with the last party fastest gives lexicographic order.
    int j = s.parties() - 1;
    while (j >= 0 && idx[j] == s.settings()) idx[j--] = 0;
    if (j < 0) break;
    ++idx[j];
    basis.push_back(Monomial::from_index(idx));
  }
  return basis;
}

Rational CorrelationVector::at(const Monomial& m) const {
  auto it = std::lower_bound(basis.begin(), basis.end(), m);
  if (it == basis.end() || !(*it == m)) throw InvalidArgument("monomial is not a correlation coordinate");
  return coordinates[static_cast<std::size_t>(it - basis.begin())];
}

CorrelationVector vertex_vector(const Assignment& a) {
  CorrelationVector v{a.scenario(), correlation_basis(a.scenario()), {}};
  v.coordinates.reserve(v.basis.size());
  for (const auto& m : v.basis) v.coordinates.emplace_back(m.sign(a));
  return v;
}

namespace {

std::vector<std::int64_t> vertex_row(const std::vector<Monomial>& basis, const Assignment& a) {
  std::vector<std::int64_t> row(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) row[i] = basis[i].sign(a);
  return row;
}

}  // namespace

int polytope_dimension(const Scenario& s) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, int> cache;
  {
    std::lock_guard lock(mu);
    auto it = cache.find({s.parties(), s.settings()});
    if (it != cache.end()) return it->second;
  }
  require_enumerable(s);
  const auto basis = correlation_basis(s);
  std::vector<std::vector<std::int64_t>> points;
  const std::uint64_t count = std::uint64_t(1) << s.observables();
  points.reserve(count);
  for (std::uint64_t bits = 0; bits < count; ++bits) {
    points.push_back(vertex_row(basis, Assignment::from_bits(s, bits)));
  }
  const int dim = exact_affine_rank(points);
  std::lock_guard lock(mu);
  cache[{s.parties(), s.settings()}] = dim;
  return dim;
}

TightnessReport is_tight(const BellPolynomial& p, const Rational& bound) {
  const Scenario& s = p.scenario();
  require_enumerable(s);
  const ExtendedPolynomial ep = to_extended(p);
  TightnessReport report;
  report.bound = bound;

  std::vector<std::uint64_t> saturating;
  if (integer_form(ep)) {
    std::int64_t max_scaled = std::numeric_limits<std::int64_t>::min();
    std::vector<std::pair<std::uint64_t, std::int64_t>> values;
    values.reserve(std::size_t(1) << s.observables());
    const std::int64_t den = for_each_root(ep, [&](std::uint64_t bits, std::int64_t v) {
      values.emplace_back(bits, v);
      max_scaled = std::max(max_scaled, v);
    });
    report.lhv_max = Rational(max_scaled, den);
    const Rational scaled_bound = bound * Rational(den);
    if (scaled_bound.is_integer() && scaled_bound.small_numerator()) {
      const std::int64_t target = *scaled_bound.small_numerator();
      for (const auto& [bits, v] : values) {
        if (v == target) saturating.push_back(bits);
      }
    }
  } else {
    const std::uint64_t count = std::uint64_t(1) << s.observables();
    std::optional<Rational> best;
    for (std::uint64_t bits = 0; bits < count; ++bits) {
      const Rational v = p.evaluate(Assignment::from_bits(s, bits));
      if (!best || v > *best) best = v;
      if (v == bound) saturating.push_back(bits);
    }
    report.lhv_max = *best;
  }
  std::sort(saturating.begin(), saturating.end());

  report.valid = report.lhv_max <= bound;
  report.saturating_count = saturating.size();
  report.polytope_dim = polytope_dimension(s);
  const auto basis = correlation_basis(s);
  std::vector<std::vector<std::int64_t>> points;
  points.reserve(saturating.size());
  for (auto bits : saturating) points.push_back(vertex_row(basis, Assignment::from_bits(s, bits)));
  report.affine_rank = exact_affine_rank(points);
  report.is_facet = report.valid && report.lhv_max == bound && report.affine_rank == report.polytope_dim - 1;
  return report;
}

Rational lhv_expectation(const ExtendedPolynomial& p, std::span<const WeightedAssignment> mixture) {
  if (mixture.empty()) throw InvalidArgument("empty LHV mixture");
  Rational total_weight;
  Rational value;
  for (const auto& [w, a] : mixture) {
    if (w.sign() < 0) throw InvalidArgument("negative mixture weight");
    total_weight += w;
    value += w * p.evaluate(a);
  }
  if (total_weight != Rational(1)) throw InvalidArgument("mixture weights must sum to 1");
  return value;
}

Rational lhv_expectation(const BellPolynomial& p, std::span<const WeightedAssignment> mixture) {
  return lhv_expectation(to_extended(p), mixture);
}

std::vector<Relabeling> invariance_group(const BellPolynomial& p, bool with_flips) {
  std::vector<Relabeling> group;
  for_each_relabeling(p, p, with_flips, [&](const Relabeling& r) {
    group.push_back(r);
    return true;
  });
  return group;
}

}  // namespace bellforge::lhv
