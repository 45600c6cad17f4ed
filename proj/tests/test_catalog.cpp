#include <gtest/gtest.h>

#include "bellforge/catalog.hpp"
#include "bellforge/errors.hpp"
#include "bellforge/lhvlab.hpp"
#include "bellforge/random.hpp"

using namespace bellforge;

namespace {

ExtendedPolynomial product(const Scenario& s, std::initializer_list<std::pair<int, int>> factors) {
  std::vector<std::uint32_t> masks(s.parties(), 0u);
  for (auto [party, setting] : factors) masks[party] ^= 1u << (setting - 1);
  return ExtendedPolynomial::monomial(s, Monomial(masks));
}

}  // namespace

TEST(Catalog, RegistrySelfChecks) {
  const auto& all = catalog::entries();
  EXPECT_EQ(all.size(), 11u);
  for (const auto& e : all) {
    const auto c = catalog::self_check(e);
    EXPECT_TRUE(c.class_ok) << e.name;
    EXPECT_TRUE(c.bound_ok) << e.name;
  }
  EXPECT_THROW(catalog::find("nope"), InvalidArgument);
}

TEST(Catalog, PrintedCoefficients) {
  EXPECT_EQ(catalog::i33().coefficient({2, 2, 2}), Rational(4, 8));
  EXPECT_EQ(catalog::i42().coefficient({1, 1, 1, 1}), Rational(-5, 9));
  EXPECT_EQ(catalog::chsh().coefficient({2, 2}), Rational(-1, 2));
}

TEST(Compose, ChshMabkAndIdentity) {
  const Scenario s2(2, 2);
  EXPECT_EQ(catalog::compose_xyz(product(s2, {{0, 1}, {1, 1}}), product(s2, {{0, 1}, {1, 2}}),
                                 product(s2, {{0, 2}, {1, 1}})),
            to_extended(catalog::chsh()));

  const Scenario s3(3, 2);
  const auto m3 = catalog::compose_xyz(product(s3, {{0, 1}, {1, 1}, {2, 2}}), product(s3, {{0, 1}, {1, 2}, {2, 1}}),
                                       product(s3, {{0, 2}, {1, 1}, {2, 1}}));
  BellPolynomial displayed(s3);
  displayed.add({1, 1, 2}, Rational(1, 2))
      .add({1, 2, 1}, Rational(1, 2))
      .add({2, 1, 1}, Rational(1, 2))
      .add({2, 2, 2}, Rational(-1, 2));
  EXPECT_EQ(m3, to_extended(displayed));
  EXPECT_EQ(to_bell(m3), catalog::mabk(3));

  const auto one = ExtendedPolynomial::constant(s2, 1);
  EXPECT_EQ(catalog::compose_xyz(one, one, one), one);
}

TEST(Compose, RejectsNonInvolutions) {
  const Scenario s(2, 2);
  const auto x = ExtendedPolynomial::observable(s, 0, 1) + ExtendedPolynomial::observable(s, 1, 1);
  const auto y = ExtendedPolynomial::observable(s, 0, 2);
  EXPECT_THROW(catalog::compose_xyz(x, y, y), InvalidArgument);
}

TEST(Compose, OutputSquaresToOne) {
  Rng rng(17);
  const Scenario s(3, 2);
  auto random_product = [&] {
    std::vector<std::uint32_t> masks(3);
    for (auto& m : masks) m = static_cast<std::uint32_t>(rng.uniform() * 4);
    const Rational sign = rng.uniform() < 0.5 ? 1 : -1;
    return ExtendedPolynomial::monomial(s, Monomial(masks), sign);
  };
  for (int i = 0; i < 100; ++i) {
    const auto out = catalog::compose_xyz(random_product(), random_product(), random_product());
    EXPECT_EQ(out * out, ExtendedPolynomial::constant(s, 1));
  }
}

TEST(Recursion, UnrollsToChshAndMabk) {
  EXPECT_EQ(catalog::mabk(2), catalog::chsh());
  for (int n = 2; n <= 5; ++n) {
    EXPECT_EQ(lhv::classify(catalog::mabk(n)), lhv::SnClass::of(2)) << n;
    EXPECT_EQ(lhv::lhv_bound(catalog::mabk(n)).max, Rational(1)) << n;
  }
  EXPECT_THROW(catalog::mabk(6), InvalidArgument);
  EXPECT_THROW(catalog::recursive_extend(catalog::chsh(), catalog::i33()), ScenarioMismatch);
}

TEST(Recursion, ChenFamily) {
  for (int n = 3; n <= 4; ++n) {
    const auto p = catalog::chen_family(n);
    EXPECT_EQ(p.scenario(), Scenario(n, 2));
    EXPECT_EQ(lhv::classify(p), lhv::SnClass::of(2));
    EXPECT_EQ(lhv::lhv_bound(p).max, Rational(1));
  }
}

TEST(IPair, SumIsShiftedChsh) {
  const auto [i1, i2] = catalog::i1_i2();
  const Scenario s(2, 2);
  const Monomial all({0b11, 0b11});
  EXPECT_EQ(i1.coefficient(all), Rational(1, 2));
  EXPECT_EQ(i2.coefficient(all), Rational(-1, 2));
  EXPECT_EQ(i1 * i1, ExtendedPolynomial::constant(s, 1));
  EXPECT_EQ(i2 * i2, ExtendedPolynomial::constant(s, 1));
  const auto sum = linear_combine({1, 1}, {i1, i2});
  EXPECT_TRUE(sum.is_computable());
  EXPECT_EQ(to_bell(sum - ExtendedPolynomial::constant(s, 1)), catalog::chsh());
  for (const auto& r : lhv::enumerate_roots(i1).distinct()) EXPECT_TRUE(r == Rational(1) || r == Rational(-1));
}

TEST(I42, VariantCertificates) {
  const auto certs = catalog::certify_i42_variants();
  ASSERT_EQ(certs.size(), 4u);
  int certified = 0;
  for (const auto& c : certs) {
    certified += c.theorem_certified() ? 1 : 0;
    EXPECT_FALSE(c.passes()) << catalog::to_string(c.variant);
  }
  EXPECT_EQ(certified, 1);
  EXPECT_EQ(catalog::resolve_i42_canonical(), catalog::I42Variant::symmetric_orbit);
  EXPECT_EQ(catalog::i42(), catalog::i42(catalog::I42Variant::symmetric_orbit));
}

TEST(I42, PrintedVariantsAreNotS3) {
  for (auto v : {catalog::I42Variant::printed, catalog::I42Variant::swap_first, catalog::I42Variant::swap_second}) {
    EXPECT_EQ(lhv::lhv_bound(catalog::i42(v)).max, Rational(25, 9)) << catalog::to_string(v);
  }
}

TEST(I42, VariantNames) {
  for (auto v : catalog::i42_candidates()) EXPECT_EQ(catalog::parse_i42_variant(catalog::to_string(v)), v);
  EXPECT_EQ(catalog::parse_i42_variant("canonical"), catalog::I42Variant::canonical);
  EXPECT_THROW(catalog::parse_i42_variant("bogus"), InvalidArgument);
  const auto e = catalog::find("i42", catalog::I42Variant::printed);
  EXPECT_EQ(to_bell(e.polynomial), catalog::i42(catalog::I42Variant::printed));
}

TEST(Shifts, ShiftedFormsAreS3) {
  for (const char* name : {"i42", "i42p"}) {
    const auto e = catalog::find(name);
    EXPECT_EQ(lhv::classify(e.shifted()), lhv::SnClass::of(3)) << name;
    EXPECT_EQ(e.shift.offset + e.shift.scale, Rational(1)) << name;
  }
}
