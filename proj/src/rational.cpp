#include "metachain/rational.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "metachain/errors.hpp"

namespace metachain {
namespace {

__int128 wide_gcd(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

bool fits(__int128 v) {
  return v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max();
}

[[noreturn]] void bad_literal(std::string_view text, const char* why) {
  throw ParseError("malformed rational '" + std::string(text) + "': " + why);
}

std::int64_t parse_int(std::string_view digits, std::string_view whole) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec == std::errc::result_out_of_range) bad_literal(whole, "out of 64-bit range");
  if (ec != std::errc() || ptr != digits.data() + digits.size()) bad_literal(whole, "not a number");
  return value;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  *this = from_wide(num, den);
}

Rational Rational::from_wide(__int128 num, __int128 den) {
  if (den == 0) throw std::domain_error("division by zero rational");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  __int128 g = wide_gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (!fits(num) || !fits(den)) throw std::overflow_error("rational overflow");
  Rational r;
  r.num_ = static_cast<std::int64_t>(num);
  r.den_ = static_cast<std::int64_t>(den);
  return r;
}

Rational Rational::parse(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  if (s.empty()) bad_literal(text, "empty");

  bool negative = false;
  std::string_view body = s;
  if (body.front() == '+' || body.front() == '-') {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }

  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    auto p = body.substr(0, slash);
    auto q = body.substr(slash + 1);
    if (!all_digits(p) || !all_digits(q)) bad_literal(text, "expected p/q with decimal integers");
    std::int64_t den = parse_int(q, text);
    if (den == 0) bad_literal(text, "zero denominator");
    std::int64_t num = parse_int(p, text);
    return Rational(negative ? -num : num, den);
  }

  auto dot = body.find('.');
  std::string_view int_part = body.substr(0, dot);
  std::string_view frac_part = dot == std::string_view::npos ? std::string_view{} : body.substr(dot + 1);
  if (int_part.empty() && frac_part.empty()) bad_literal(text, "no digits");
  if (!int_part.empty() && !all_digits(int_part)) bad_literal(text, "unexpected character");
  if (!frac_part.empty() && !all_digits(frac_part)) bad_literal(text, "unexpected character");
  if (frac_part.size() > 18) bad_literal(text, "more than 18 fractional digits");

  __int128 num = int_part.empty() ? 0 : parse_int(int_part, text);
  __int128 den = 1;
  for (char c : frac_part) {
    num = num * 10 + (c - '0');
    den *= 10;
  }
  if (negative) num = -num;
  try {
    return from_wide(num, den);
  } catch (const std::overflow_error&) {
    bad_literal(text, "out of 64-bit range");
  }
}

double Rational::to_double() const {
  return static_cast<double>(to_long_double());
}

long double Rational::to_long_double() const {
  return static_cast<long double>(num_) / static_cast<long double>(den_);
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

std::string Rational::decimal_str() const {
  if (den_ == 1) return std::to_string(num_);
  std::int64_t d = den_;
  int twos = 0;
  int fives = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++twos;
  }
  while (d % 5 == 0) {
    d /= 5;
    ++fives;
  }
  int digits = std::max(twos, fives);
  if (d != 1 || digits > 18) return str();

  __int128 scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  __int128 scaled = static_cast<__int128>(num_) * (scale / den_);
  bool negative = scaled < 0;
  if (negative) scaled = -scaled;
  __int128 whole = scaled / scale;
  __int128 frac = scaled % scale;

  std::string frac_digits(static_cast<std::size_t>(digits), '0');
  for (int i = digits - 1; i >= 0; --i) {
    frac_digits[static_cast<std::size_t>(i)] = static_cast<char>('0' + static_cast<int>(frac % 10));
    frac /= 10;
  }
  return (negative ? "-" : "") + std::to_string(static_cast<std::int64_t>(whole)) + "." + frac_digits;
}

Rational Rational::operator-() const {
  return from_wide(-static_cast<__int128>(num_), den_);
}

Rational operator+(const Rational& a, const Rational& b) {
  if (a.den_ == b.den_) return Rational::from_wide(static_cast<__int128>(a.num_) + b.num_, a.den_);
  return Rational::from_wide(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                             static_cast<__int128>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
  if (a.den_ == b.den_) return Rational::from_wide(static_cast<__int128>(a.num_) - b.num_, a.den_);
  return Rational::from_wide(static_cast<__int128>(a.num_) * b.den_ - static_cast<__int128>(b.num_) * a.den_,
                             static_cast<__int128>(a.den_) * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
  return Rational::from_wide(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw std::domain_error("division by zero rational");
  return Rational::from_wide(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  if (a.den_ == b.den_) return a.num_ <=> b.num_;
  __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
  __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
  return lhs <=> rhs;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
  return os << r.decimal_str();
}

}  // namespace metachain
