#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>

namespace netform {

/// Exact rational arithmetic for costs and utilities. All comparisons in the
/// model are strict inequalities over rationals; floating point would corrupt
/// ties, so nothing in the engine ever rounds. Kept normalized (positive
/// denominator, reduced), with 128-bit intermediates so desk-scale values
/// never overflow silently.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t value) : num_(value) {}  // NOLINT: implicit by design

  constexpr Rational(std::int64_t numerator, std::int64_t denominator) {
    if (denominator == 0) throw std::invalid_argument("rational with zero denominator");
    __int128 n = numerator;
    __int128 d = denominator;
    normalize(n, d);
    num_ = narrow(n);
    den_ = narrow(d);
  }

  constexpr std::int64_t numerator() const { return num_; }
  constexpr std::int64_t denominator() const { return den_; }

  friend constexpr Rational operator+(const Rational& a, const Rational& b) {
    return from128(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                   static_cast<__int128>(a.den_) * b.den_);
  }
  friend constexpr Rational operator-(const Rational& a, const Rational& b) {
    return from128(static_cast<__int128>(a.num_) * b.den_ - static_cast<__int128>(b.num_) * a.den_,
                   static_cast<__int128>(a.den_) * b.den_);
  }
  friend constexpr Rational operator*(const Rational& a, const Rational& b) {
    return from128(static_cast<__int128>(a.num_) * b.num_,
                   static_cast<__int128>(a.den_) * b.den_);
  }
  friend constexpr Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::invalid_argument("division by zero rational");
    return from128(static_cast<__int128>(a.num_) * b.den_,
                   static_cast<__int128>(a.den_) * b.num_);
  }

  constexpr Rational operator-() const {
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }

  constexpr Rational& operator+=(const Rational& o) { return *this = *this + o; }
  constexpr Rational& operator-=(const Rational& o) { return *this = *this - o; }
  constexpr Rational& operator*=(const Rational& o) { return *this = *this * o; }
  constexpr Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend constexpr bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend constexpr std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
    const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

 private:
  static constexpr void normalize(__int128& n, __int128& d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    __int128 a = n < 0 ? -n : n;
    __int128 b = d;
    while (b != 0) {
      const __int128 t = a % b;
      a = b;
      b = t;
    }
    if (a > 1) {
      n /= a;
      d /= a;
    }
  }

  static constexpr std::int64_t narrow(__int128 value) {
    if (value > INT64_MAX || value < INT64_MIN)
      throw std::overflow_error("rational arithmetic overflow");
    return static_cast<std::int64_t>(value);
  }

  static constexpr Rational from128(__int128 n, __int128 d) {
    normalize(n, d);
    Rational r;
    r.num_ = narrow(n);
    r.den_ = narrow(d);
    return r;
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

inline std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

/// Parses "p", "p/q" or a plain decimal like "0.4" (converted exactly).
inline Rational parse_rational(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");

  const auto bad = [&] {
    return std::invalid_argument("malformed rational literal: '" + std::string(text) + "'");
  };

  bool negative = false;
  std::size_t pos = 0;
  if (text[0] == '+' || text[0] == '-') {
    negative = text[0] == '-';
    pos = 1;
  }

  auto parse_digits = [&](std::int64_t& out, std::size_t max_digits) {
    std::size_t start = pos;
    out = 0;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      if (pos - start >= max_digits) throw std::invalid_argument("rational literal too long");
      out = out * 10 + (text[pos] - '0');
      ++pos;
    }
    if (pos == start) throw bad();
  };

  std::int64_t integer_part = 0;
  parse_digits(integer_part, 18);

  Rational value(integer_part);
  if (pos < text.size() && text[pos] == '/') {
    ++pos;
    std::int64_t den = 0;
    parse_digits(den, 18);
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    value = Rational(integer_part, den);
  } else if (pos < text.size() && text[pos] == '.') {
    ++pos;
    std::size_t start = pos;
    std::int64_t frac = 0;
    parse_digits(frac, 17);
    std::int64_t scale = 1;
    for (std::size_t i = start; i < pos; ++i) scale *= 10;
    value = Rational(integer_part) + Rational(frac, scale);
  }
  if (pos != text.size()) throw bad();
  return negative ? -value : value;
}

}  // namespace netform
