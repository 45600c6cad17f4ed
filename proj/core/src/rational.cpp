#include "bellforge/rational.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <limits>
#include <ostream>

#include "bellforge/errors.hpp"

namespace bellforge {

namespace mp = boost::multiprecision;

struct Rational::Big {
  mp::cpp_rational value;
};

namespace {

__extension__ typedef __int128 i128;
__extension__ typedef unsigned __int128 u128;

u128 gcd128(u128 a, u128 b) {
  while (b != 0) {
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

u128 abs128(i128 v) { return v < 0 ? u128(0) - u128(v) : u128(v); }

bool fits64(i128 v) {
  return v >= std::numeric_limits<std::int64_t>::min() &&
         v <= std::numeric_limits<std::int64_t>::max();
}

mp::cpp_int to_cpp_int(i128 v) {
  bool neg = v < 0;
  u128 m = abs128(v);
  mp::cpp_int r = static_cast<std::uint64_t>(m >> 64);
  r <<= 64;
  r += static_cast<std::uint64_t>(m);
  return neg ? mp::cpp_int(-r) : r;
}

}  // namespace

Rational::Rational(std::int64_t numerator, std::int64_t denominator) {
  if (denominator == 0) throw InvalidArgument("rational with zero denominator");
  i128 n = numerator;
  i128 d = denominator;
  if (d < 0) {
    n = -n;
    d = -d;
  }
  u128 g = gcd128(abs128(n), u128(d));
  if (g > 1) {
    n /= i128(g);
    d /= i128(g);
  }
  if (fits64(n) && fits64(d)) {
    num_ = static_cast<std::int64_t>(n);
    den_ = static_cast<std::int64_t>(d);
  } else {
    *this = from_big(Big{mp::cpp_rational(to_cpp_int(n), to_cpp_int(d))});
  }
}

Rational::Rational(std::shared_ptr<const Big> big) : big_(std::move(big)) {}

Rational Rational::from_big(Big value) {
  const auto& num = mp::numerator(value.value);
  const auto& den = mp::denominator(value.value);
  constexpr auto lo = std::numeric_limits<std::int64_t>::min();
  constexpr auto hi = std::numeric_limits<std::int64_t>::max();
  if (num >= lo && num <= hi && den <= hi) {
    Rational r;
    r.num_ = num.convert_to<std::int64_t>();
    r.den_ = den.convert_to<std::int64_t>();
    return r;
  }
  return Rational(std::make_shared<const Big>(std::move(value)));
}

Rational::Big Rational::to_big() const {
  if (big_) return *big_;
  return Big{mp::cpp_rational(mp::cpp_int(num_), mp::cpp_int(den_))};
}

Rational Rational::parse(std::string_view text) {
  std::string s(text);
  auto slash = s.find('/');
  try {
    if (s.empty()) throw ParseError("empty rational");
    if (slash == std::string::npos) {
      return from_big(Big{mp::cpp_rational(mp::cpp_int(s))});
    }
    mp::cpp_int n(s.substr(0, slash));
    mp::cpp_int d(s.substr(slash + 1));
    if (d == 0) throw ParseError("rational with zero denominator: " + s);
    return from_big(Big{mp::cpp_rational(n, d)});
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    throw ParseError("malformed rational: " + s);
  }
}

bool Rational::is_integer() const {
  if (big_) return mp::denominator(big_->value) == 1;
  return den_ == 1;
}

int Rational::sign() const {
  if (big_) return big_->value.sign();
  return (num_ > 0) - (num_ < 0);
}

std::optional<std::int64_t> Rational::small_numerator() const {
  if (big_) return std::nullopt;
  return num_;
}

std::optional<std::int64_t> Rational::small_denominator() const {
  if (big_) return std::nullopt;
  return den_;
}

std::string Rational::numerator_string() const {
  if (big_) return mp::numerator(big_->value).str();
  return std::to_string(num_);
}

std::string Rational::denominator_string() const {
  if (big_) return mp::denominator(big_->value).str();
  return std::to_string(den_);
}

std::string Rational::str() const {
  if (is_integer()) return numerator_string();
  return numerator_string() + "/" + denominator_string();
}

double Rational::to_double() const {
  if (big_) return big_->value.convert_to<double>();
  return static_cast<double>(num_) / static_cast<double>(den_);
}

Rational Rational::operator-() const {
  if (!big_ && num_ != std::numeric_limits<std::int64_t>::min()) {
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }
  return from_big(Big{-to_big().value});
}

Rational operator+(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) {
    i128 n = i128(a.num_) * b.den_ + i128(b.num_) * a.den_;
    i128 d = i128(a.den_) * b.den_;
    u128 g = gcd128(abs128(n), u128(d));
    if (g > 1) {
      n /= i128(g);
      d /= i128(g);
    }
    if (fits64(n) && fits64(d)) {
      Rational r;
      r.num_ = static_cast<std::int64_t>(n);
      r.den_ = static_cast<std::int64_t>(d);
      return r;
    }
  }
  return Rational::from_big(Rational::Big{a.to_big().value + b.to_big().value});
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) {
    i128 n = i128(a.num_) * b.num_;
    i128 d = i128(a.den_) * b.den_;
    u128 g = gcd128(abs128(n), u128(d));
    if (g > 1) {
      n /= i128(g);
      d /= i128(g);
    }
    if (fits64(n) && fits64(d)) {
      Rational r;
      r.num_ = static_cast<std::int64_t>(n);
      r.den_ = static_cast<std::int64_t>(d);
      return r;
    }
  }
  return Rational::from_big(Rational::Big{a.to_big().value * b.to_big().value});
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.is_zero()) throw InvalidArgument("division by zero");
  if (!a.big_ && !b.big_) {
    i128 n = i128(a.num_) * b.den_;
    i128 d = i128(a.den_) * b.num_;
    if (d < 0) {
      n = -n;
      d = -d;
    }
    u128 g = gcd128(abs128(n), u128(d));
    if (g > 1) {
      n /= i128(g);
      d /= i128(g);
    }
    if (fits64(n) && fits64(d)) {
      Rational r;
      r.num_ = static_cast<std::int64_t>(n);
      r.den_ = static_cast<std::int64_t>(d);
      return r;
    }
  }
  return Rational::from_big(Rational::Big{a.to_big().value / b.to_big().value});
}

bool operator==(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
  if (a.big_ && b.big_) return a.big_->value == b.big_->value;
  // Demotion is canonical: a big value never equals a small one.
  return false;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) {
    i128 l = i128(a.num_) * b.den_;
    i128 r = i128(b.num_) * a.den_;
    return l <=> r;
  }
  const auto la = a.to_big().value;
  const auto lb = b.to_big().value;
  if (la < lb) return std::strong_ordering::less;
  if (la > lb) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace bellforge
