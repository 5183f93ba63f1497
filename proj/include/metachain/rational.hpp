#pragma once

#include <compare>
#include <cstdint>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>

namespace metachain {

/// Exact rational number with 64-bit numerator and denominator.
///
/// Always normalized (gcd(num, den) == 1, den > 0). Every arithmetic
/// operation is carried out in 128-bit intermediates and throws
/// std::overflow_error if the normalized result does not fit in 64 bits;
/// results are never silently wrapped.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t value) : num_(value) {}  // NOLINT(google-explicit-constructor)
  Rational(std::int64_t num, std::int64_t den);

  /// Parses "7", "-7", "3.25", ".5", "7/2". Throws ParseError naming the token.
  static Rational parse(std::string_view text);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  bool is_integer() const { return den_ == 1; }

  double to_double() const;
  long double to_long_double() const;

  /// Canonical "p" or "p/q" form; parse(str()) == *this.
  std::string str() const;
  /// Terminating decimal when the denominator has only factors 2 and 5,
  /// otherwise the same as str(). Also round-trips through parse().
  std::string decimal_str() const;

  Rational operator-() const;
  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  static Rational from_wide(__int128 num, __int128 den);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

struct RationalHash {
  std::size_t operator()(const Rational& r) const noexcept {
    return std::hash<std::int64_t>{}(r.num()) * 1000003u ^ std::hash<std::int64_t>{}(r.den());
  }
};

}  // namespace metachain
