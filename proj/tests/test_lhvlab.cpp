#include <gtest/gtest.h>

#include <cstdlib>

#include "bellforge/catalog.hpp"
#include "bellforge/errors.hpp"
#include "bellforge/lhvlab.hpp"
#include "support.hpp"

using namespace bellforge;

namespace {

lhv::RootSpectrum spectrum(std::initializer_list<std::pair<Rational, std::uint64_t>> entries) {
  lhv::RootSpectrum s;
  for (const auto& [r, n] : entries) {
    s.entries[r] = n;
    s.total += n;
  }
  return s;
}

class ScopedEnv {
 public:
  ScopedEnv(const char* name, const char* value) : name_(name) { setenv(name, value, 1); }
  ~ScopedEnv() { unsetenv(name_); }

 private:
  const char* name_;
};

}  // namespace

TEST(Roots, Chsh) {
  EXPECT_EQ(lhv::enumerate_roots(catalog::chsh()), spectrum({{-1, 8}, {1, 8}}));
}

TEST(Roots, I33AndI42) {
  EXPECT_EQ(lhv::enumerate_roots(catalog::i33()), spectrum({{-1, 192}, {0, 128}, {1, 192}}));
  EXPECT_EQ(lhv::enumerate_roots(catalog::i42(catalog::I42Variant::symmetric_orbit)),
            spectrum({{Rational(-23, 9), 21}, {Rational(-7, 9), 102}, {1, 133}}));
  EXPECT_EQ(lhv::enumerate_roots(catalog::i42prime()),
            spectrum({{Rational(-11, 5), 14}, {Rational(-3, 5), 132}, {1, 110}}));
}

TEST(Roots, GrayCodeMatchesNaive) {
  for (const auto& e : catalog::entries()) {
    EXPECT_EQ(lhv::enumerate_roots(e.polynomial), lhv::enumerate_roots_naive(e.polynomial)) << e.name;
  }
  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    const auto p = testkit::random_polynomial(Scenario(3, 2), rng);
    EXPECT_EQ(lhv::enumerate_roots(p), lhv::enumerate_roots_naive(p));
  }
}

TEST(Roots, VisitsEveryAssignmentOnce) {
  const auto p = to_extended(catalog::mabk(3));
  std::vector<int> seen(64, 0);
  const std::int64_t den = lhv::for_each_root(p, [&](std::uint64_t bits, std::int64_t scaled) {
    ++seen[bits];
    EXPECT_EQ(Rational(scaled, 1), p.evaluate(Assignment::from_bits(p.scenario(), bits)) * Rational(2));
  });
  EXPECT_EQ(den, 2);
  for (int n : seen) EXPECT_EQ(n, 1);
}

TEST(Roots, EnumerationLimitFromEnvironment) {
  {
    ScopedEnv env("BELLFORGE_MAX_ENUM", "256");
    EXPECT_EQ(lhv::enumeration_limit(), 256u);
    EXPECT_NO_THROW(lhv::enumerate_roots(catalog::chsh()));
    EXPECT_THROW(lhv::enumerate_roots(catalog::i33()), TooLarge);
  }
  EXPECT_EQ(lhv::enumeration_limit(), lhv::kDefaultEnumerationLimit);
  EXPECT_THROW(lhv::require_enumerable(Scenario(6, 5)), TooLarge);
}

TEST(Classify, Examples) {
  EXPECT_EQ(lhv::classify(catalog::chsh()), lhv::SnClass::of(2));
  EXPECT_EQ(lhv::classify(catalog::i33()), lhv::SnClass::of(3));
  EXPECT_EQ(lhv::classify(Rational(2) * catalog::chsh()), lhv::SnClass::unclassified());
  EXPECT_EQ(lhv::classify(catalog::i42prime()), lhv::SnClass::unclassified());
  EXPECT_EQ(lhv::classify(Rational(5, 8) * catalog::i42prime() + BellPolynomial::constant(Scenario(4, 2), Rational(3, 8))),
            lhv::SnClass::of(3));
  EXPECT_EQ(lhv::SnClass::of(3).label(), "S3");
  EXPECT_EQ(lhv::SnClass::unclassified().label(), "Unclassified");
}

TEST(Classify, SmallestGridWins) {
  // Roots {-1, 1} lie on every odd grid; the report is S2.
  EXPECT_EQ(lhv::classify(spectrum({{-1, 1}, {1, 1}})), lhv::SnClass::of(2));
  EXPECT_EQ(lhv::classify(spectrum({{-1, 1}, {Rational(1, 3), 1}})), lhv::SnClass::of(4));
  EXPECT_EQ(lhv::classify(spectrum({{Rational(1, 2), 1}})), lhv::SnClass::of(5));
  EXPECT_TRUE(lhv::on_grid(Rational(-1, 3), 4));
  EXPECT_FALSE(lhv::on_grid(Rational(2), 4));
}

TEST(Bounds, Exact) {
  const auto b = lhv::lhv_bound(catalog::chsh());
  EXPECT_EQ(b.min, Rational(-1));
  EXPECT_EQ(b.max, Rational(1));
  EXPECT_EQ(lhv::lhv_bound(catalog::i33()).max, Rational(1));
  EXPECT_EQ(lhv::lhv_bound(catalog::i42()).max, Rational(1));
  EXPECT_EQ(lhv::lhv_bound(catalog::i42prime()).min, Rational(-11, 5));
}

TEST(Polytope, Dimensions) {
  EXPECT_EQ(lhv::polytope_dimension(Scenario(2, 2)), 8);
  EXPECT_EQ(lhv::polytope_dimension(Scenario(3, 3)), 63);
  EXPECT_EQ(lhv::polytope_dimension(Scenario(4, 2)), 80);
  EXPECT_EQ(lhv::correlation_basis(Scenario(2, 2)).size(), 8u);
}

TEST(Tightness, ChshAndI33AreFacets) {
  const auto chsh = lhv::is_tight(catalog::chsh(), 1);
  EXPECT_TRUE(chsh.valid);
  EXPECT_TRUE(chsh.is_facet);
  EXPECT_EQ(chsh.saturating_count, 8u);
  EXPECT_EQ(chsh.independent_saturating(), 8u);
  const auto i33 = lhv::is_tight(catalog::i33(), 1);
  EXPECT_TRUE(i33.is_facet);
  EXPECT_EQ(i33.polytope_dim, 63);
}

TEST(Tightness, NonFacets) {
  const auto one = BellPolynomial::constant(Scenario(2, 2), 1);
  const auto r = lhv::is_tight(one, 1);
  EXPECT_TRUE(r.valid);
  EXPECT_FALSE(r.is_facet);
  EXPECT_EQ(r.saturating_count, 16u);

  const auto loose = lhv::is_tight(catalog::chsh(), 2);
  EXPECT_TRUE(loose.valid);
  EXPECT_EQ(loose.saturating_count, 0u);
  EXPECT_FALSE(loose.is_facet);

  const auto invalid = lhv::is_tight(catalog::chsh(), Rational(1, 2));
  EXPECT_FALSE(invalid.valid);
  EXPECT_FALSE(invalid.is_facet);
}

TEST(Tightness, FourPartyRanks) {
  // Both are valid with maximum 1 but their saturating vertices span less
  // than a facet of the 80-dimensional polytope.
  const auto i42 = lhv::is_tight(catalog::i42(catalog::I42Variant::symmetric_orbit), 1);
  EXPECT_TRUE(i42.valid);
  EXPECT_EQ(i42.saturating_count, 133u);
  EXPECT_EQ(i42.affine_rank, 78);
  const auto i42p = lhv::is_tight(catalog::i42prime(), 1);
  EXPECT_EQ(i42p.saturating_count, 110u);
  EXPECT_EQ(i42p.affine_rank, 69);
  EXPECT_TRUE(lhv::is_tight(catalog::mabk(4), 1).valid);
}

TEST(Mixture, ExpectationValidation) {
  const Scenario s(2, 2);
  const auto p = catalog::chsh();
  std::vector<lhv::WeightedAssignment> m{{Rational(1, 2), Assignment(s)}, {Rational(1, 2), Assignment(s)}};
  EXPECT_EQ(lhv::lhv_expectation(p, m), Rational(1));
  m[1].weight = Rational(1, 3);
  EXPECT_THROW(lhv::lhv_expectation(p, m), InvalidArgument);
  m[1].weight = Rational(-1, 2);
  m[0].weight = Rational(3, 2);
  EXPECT_THROW(lhv::lhv_expectation(p, m), InvalidArgument);
}

TEST(Symmetry, InvarianceGroupFixesPolynomial) {
  const auto p = catalog::chsh();
  const auto group = lhv::invariance_group(p, true);
  EXPECT_FALSE(group.empty());
  EXPECT_NE(std::find(group.begin(), group.end(), Relabeling::identity(p.scenario())), group.end());
  for (const auto& r : group) EXPECT_EQ(apply_relabeling(p, r), p);
  EXPECT_EQ(lhv::invariance_group(p, true).size(), 16u);
}
