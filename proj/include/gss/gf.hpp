#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gss/error.hpp"

namespace gss {

// GF(2^w) for w in {8, 16}, log/antilog tables over a primitive polynomial.
class Gf {
 public:
  static constexpr std::uint32_t kPoly8 = 0x11D;     // x^8 + x^4 + x^3 + x^2 + 1
  static constexpr std::uint32_t kPoly16 = 0x1100B;  // x^16 + x^12 + x^3 + x + 1

  Gf(int width, std::uint32_t primitive_poly) : width_(width), poly_(primitive_poly) {
    if (width != 8 && width != 16)
      fail(ErrorCode::kBadInput, "field width must be 8 or 16");
    order_ = 1u << width;
    if ((poly_ >> width) != 1)
      fail(ErrorCode::kBadInput, "polynomial degree must equal the field width");
    exp_.assign(2 * (order_ - 1), 0);
    log_.assign(order_, kUnsetLog);
    std::uint32_t x = 1;
    for (std::uint32_t i = 0; i < order_ - 1; ++i) {
      if (log_[x] != kUnsetLog)
        fail(ErrorCode::kBadInput, "polynomial is not primitive over GF(2^" +
                                       std::to_string(width) + ")");
      exp_[i] = static_cast<std::uint16_t>(x);
      exp_[i + order_ - 1] = static_cast<std::uint16_t>(x);
      log_[x] = i;
      x <<= 1;
      if (x & order_) x ^= poly_;
    }
  }

  int width() const { return width_; }
  std::uint32_t order() const { return order_; }
  std::uint32_t primitive_poly() const { return poly_; }

  std::uint16_t add(std::uint16_t a, std::uint16_t b) const { return a ^ b; }

  std::uint16_t mul(std::uint16_t a, std::uint16_t b) const {
    if (a == 0 || b == 0) return 0;
    return exp_[log_[a] + log_[b]];
  }

  std::uint16_t inv(std::uint16_t a) const {
    if (a == 0) fail(ErrorCode::kBadInput, "inverse of zero");
    return exp_[order_ - 1 - log_[a]];
  }

  std::uint16_t div(std::uint16_t a, std::uint16_t b) const {
    if (b == 0) fail(ErrorCode::kBadInput, "division by zero");
    if (a == 0) return 0;
    return exp_[log_[a] + order_ - 1 - log_[b]];
  }

  std::uint16_t pow_of(std::uint16_t base, std::uint64_t exponent) const {
    if (base == 0) return exponent == 0 ? 1 : 0;
    const std::uint64_t e = (static_cast<std::uint64_t>(log_[base]) * exponent) % (order_ - 1);
    return exp_[e];
  }

  static const Gf& gf256() {
    static const Gf field(8, kPoly8);
    return field;
  }

  static const Gf& gf65536() {
    static const Gf field(16, kPoly16);
    return field;
  }

  static const Gf& for_order(std::uint32_t order) {
    if (order == 256) return gf256();
    if (order == 65536) return gf65536();
    fail(ErrorCode::kBadInput, "unsupported field order " + std::to_string(order));
  }

 private:
  static constexpr std::uint32_t kUnsetLog = 0xFFFFFFFF;

  int width_;
  std::uint32_t poly_;
  std::uint32_t order_ = 0;
  std::vector<std::uint16_t> exp_;
  std::vector<std::uint32_t> log_;
};

}  // namespace gss
