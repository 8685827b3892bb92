#pragma once

#include <cstdint>
#include <limits>
#include <string>

#include "gss/error.hpp"

namespace gss {

namespace detail {

using int128 = __int128;

inline int128 gcd128(int128 a, int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace detail

// Exact rational stored reduced with a positive denominator. Arithmetic runs
// in 128 bits; a reduced result outside 64-bit range raises OVERFLOW instead
// of wrapping.
class Rational {
 public:
  constexpr Rational() : num_(0), den_(1) {}
  Rational(std::int64_t value) : num_(value), den_(1) {}
  Rational(std::int64_t num, std::int64_t den) {
    *this = reduce(num, den);
  }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  friend Rational operator+(const Rational& x, const Rational& y) {
    return reduce(w(x.num_) * y.den_ + w(y.num_) * x.den_, w(x.den_) * y.den_);
  }
  friend Rational operator-(const Rational& x, const Rational& y) {
    return reduce(w(x.num_) * y.den_ - w(y.num_) * x.den_, w(x.den_) * y.den_);
  }
  friend Rational operator*(const Rational& x, const Rational& y) {
    return reduce(w(x.num_) * y.num_, w(x.den_) * y.den_);
  }
  friend Rational operator/(const Rational& x, const Rational& y) {
    if (y.num_ == 0) fail(ErrorCode::kBadInput, "division by zero rational");
    return reduce(w(x.num_) * y.den_, w(x.den_) * y.num_);
  }

  friend bool operator==(const Rational& x, const Rational& y) {
    return x.num_ == y.num_ && x.den_ == y.den_;
  }
  friend bool operator!=(const Rational& x, const Rational& y) { return !(x == y); }
  friend bool operator<(const Rational& x, const Rational& y) {
    return w(x.num_) * y.den_ < w(y.num_) * x.den_;
  }
  friend bool operator>(const Rational& x, const Rational& y) { return y < x; }
  friend bool operator<=(const Rational& x, const Rational& y) { return !(y < x); }
  friend bool operator>=(const Rational& x, const Rational& y) { return !(x < y); }

  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  std::string to_string() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  // Rounded to three decimal places, trailing zeros trimmed: 1/4 -> "0.25",
  // 3/10 -> "0.3", 7/12 -> "0.583", 2 -> "2".
  std::string decimal3() const {
    const bool neg = num_ < 0;
    const detail::int128 mag = neg ? -w(num_) : w(num_);
    const detail::int128 scaled = (mag * 2000 + den_) / (w(den_) * 2);
    std::string whole = std::to_string(static_cast<long long>(scaled / 1000));
    int frac = static_cast<int>(scaled % 1000);
    std::string out = (neg && scaled != 0) ? "-" + whole : whole;
    if (frac != 0) {
      std::string digits = std::to_string(frac);
      digits.insert(0, 3 - digits.size(), '0');
      while (digits.back() == '0') digits.pop_back();
      out += "." + digits;
    }
    return out;
  }

 private:
  static detail::int128 w(std::int64_t v) { return static_cast<detail::int128>(v); }

  static Rational reduce(detail::int128 num, detail::int128 den) {
    if (den == 0) fail(ErrorCode::kBadInput, "rational with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const detail::int128 g = detail::gcd128(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    const detail::int128 lo = std::numeric_limits<std::int64_t>::min();
    const detail::int128 hi = std::numeric_limits<std::int64_t>::max();
    if (num < lo || num > hi || den > hi)
      fail(ErrorCode::kOverflow, "reduced rational exceeds 64-bit range");
    Rational r;
    r.num_ = static_cast<std::int64_t>(num);
    r.den_ = static_cast<std::int64_t>(den);
    return r;
  }

  std::int64_t num_;
  std::int64_t den_;
};

}  // namespace gss
