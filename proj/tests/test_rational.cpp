#include <gtest/gtest.h>

#include <limits>
#include <sstream>

#include "bellforge/errors.hpp"
#include "bellforge/exact_rank.hpp"
#include "bellforge/rational.hpp"

using bellforge::Rational;

TEST(Rational, NormalizesSignAndLowestTerms) {
  const Rational r(6, -8);
  EXPECT_EQ(r.str(), "-3/4");
  EXPECT_EQ(*r.small_numerator(), -3);
  EXPECT_EQ(*r.small_denominator(), 4);
  EXPECT_EQ(Rational(0, -5), Rational(0));
  EXPECT_TRUE(Rational(4, 2).is_integer());
}

TEST(Rational, Arithmetic) {
  const Rational a(1, 2), b(1, 3);
  EXPECT_EQ(a + b, Rational(5, 6));
  EXPECT_EQ(a - b, Rational(1, 6));
  EXPECT_EQ(a * b, Rational(1, 6));
  EXPECT_EQ(a / b, Rational(3, 2));
  EXPECT_EQ(-a, Rational(-1, 2));
  EXPECT_LT(b, a);
  EXPECT_DOUBLE_EQ(Rational(7, 16).to_double(), 0.4375);
}

TEST(Rational, ZeroDenominatorAndDivision) {
  EXPECT_THROW(Rational(1, 0), bellforge::InvalidArgument);
  EXPECT_THROW(Rational(1) / Rational(0), bellforge::InvalidArgument);
}

TEST(Rational, OverflowPromotesAndDemotes) {
  const std::int64_t big = std::numeric_limits<std::int64_t>::max();
  const Rational sq = Rational(big) * Rational(big);
  EXPECT_TRUE(sq.is_big());
  EXPECT_EQ(sq.numerator_string(), "85070591730234615847396907784232501249");
  const Rational back = sq / Rational(big);
  EXPECT_FALSE(back.is_big());
  EXPECT_EQ(back, Rational(big));

  const Rational tiny(1, big);
  const Rational sum = tiny + Rational(1, big - 1);
  EXPECT_TRUE(sum.is_big());
  EXPECT_GT(sum, tiny);
  EXPECT_EQ(sum - Rational(1, big - 1), tiny);
}

TEST(Rational, MinInt64Negation) {
  const Rational m(std::numeric_limits<std::int64_t>::min());
  const Rational n = -m;
  EXPECT_EQ(n.str(), "9223372036854775808");
  EXPECT_EQ(-n, m);
  EXPECT_EQ(m.abs(), n);
}

TEST(Rational, Parse) {
  EXPECT_EQ(Rational::parse("-7/9"), Rational(-7, 9));
  EXPECT_EQ(Rational::parse("12"), Rational(12));
  EXPECT_EQ(Rational::parse("4/8"), Rational(1, 2));
  const Rational huge = Rational::parse("123456789012345678901234567890/3");
  EXPECT_TRUE(huge.is_big());
  EXPECT_EQ(huge.str(), "41152263004115226300411522630");
  EXPECT_THROW(Rational::parse(""), bellforge::ParseError);
  EXPECT_THROW(Rational::parse("1/0"), bellforge::ParseError);
  EXPECT_THROW(Rational::parse("abc"), bellforge::ParseError);
  EXPECT_THROW(Rational::parse("1.5"), bellforge::ParseError);
}

TEST(Rational, Stream) {
  std::ostringstream os;
  os << Rational(-23, 9);
  EXPECT_EQ(os.str(), "-23/9");
}

TEST(ExactRank, SmallMatrices) {
  const std::vector<std::vector<std::int64_t>> id{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  EXPECT_EQ(bellforge::exact_rank(id), 3u);
  const std::vector<std::vector<std::int64_t>> dep{{1, 2, 3}, {2, 4, 6}, {1, 0, 1}};
  EXPECT_EQ(bellforge::exact_rank(dep), 2u);
  EXPECT_EQ(bellforge::exact_rank(std::vector<std::vector<std::int64_t>>{}), 0u);
}

TEST(ExactRank, LargeEntriesStayExact) {
  const std::int64_t b = std::int64_t(1) << 62;
  const std::vector<std::vector<std::int64_t>> rows{{b, b - 1, 3}, {b - 1, b - 2, 5}, {1, 1, -2}};
  // Row 0 minus row 1 equals row 2, so the rank is 2; float elimination loses this.
  EXPECT_EQ(bellforge::exact_rank(rows), 2u);
}

TEST(ExactRank, AffineRank) {
  const std::vector<std::vector<std::int64_t>> line{{0, 0}, {1, 1}, {2, 2}};
  EXPECT_EQ(bellforge::exact_affine_rank(line), 1);
  const std::vector<std::vector<std::int64_t>> tri{{0, 0}, {1, 0}, {0, 1}};
  EXPECT_EQ(bellforge::exact_affine_rank(tri), 2);
  EXPECT_EQ(bellforge::exact_affine_rank(std::vector<std::vector<std::int64_t>>{}), -1);
  EXPECT_EQ(bellforge::exact_affine_rank(std::vector<std::vector<std::int64_t>>{{5, 5}}), 0);
}
