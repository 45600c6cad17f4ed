#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace bellforge {

/// Exact rational number in lowest terms with a positive denominator.
///
/// Values live in a pair of int64 while they fit. Any operation whose result
/// would overflow is redone in arbitrary precision and the result is demoted
/// back to int64 when possible, so arithmetic never wraps.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t value) : num_(value) {}  // NOLINT(google-explicit-constructor)
  Rational(std::int64_t numerator, std::int64_t denominator);

  /// Parses "p", "-p", or "p/q" with arbitrarily long integers.
  static Rational parse(std::string_view text);

  bool is_big() const { return big_ != nullptr; }
  bool is_zero() const { return !big_ && num_ == 0; }
  bool is_integer() const;
  int sign() const;

  /// int64 numerator/denominator; empty when the value needs big storage.
  std::optional<std::int64_t> small_numerator() const;
  std::optional<std::int64_t> small_denominator() const;
  std::string numerator_string() const;
  std::string denominator_string() const;

  std::string str() const;
  double to_double() const;

  Rational abs() const { return sign() < 0 ? -*this : *this; }

  Rational operator-() const;
  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b);
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

  struct Big;

 private:
  explicit Rational(std::shared_ptr<const Big> big);
  static Rational from_big(Big value);
  Big to_big() const;

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  std::shared_ptr<const Big> big_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

}  // namespace bellforge
