#pragma once

#include <algorithm>
#include <cstdint>
#include <string>

#include "gss/error.hpp"
#include "gss/rational.hpp"

namespace gss {

// Sliding-window erasure channel: within every window of w = tau + 1
// consecutive packets the channel erases at most `a` arbitrary packets, or a
// single burst of at most `b` consecutive packets. Decoding deadline is tau.
struct ChannelParams {
  int a = 0;
  int b = 0;
  int tau = 0;

  int window() const { return tau + 1; }

  static ChannelParams make(int a, int b, int tau) {
    if (!(0 < a && a <= b && b <= tau))
      fail(ErrorCode::kInvalidParams,
           "need 0 < a <= b <= tau, got (a=" + std::to_string(a) +
               ", b=" + std::to_string(b) + ", tau=" + std::to_string(tau) + ")");
    return ChannelParams{a, b, tau};
  }

  std::string label() const {
    return "(" + std::to_string(a) + "," + std::to_string(b) + "," +
           std::to_string(tau) + ")";
  }

  friend bool operator==(const ChannelParams&, const ChannelParams&) = default;
};

// tau + 1 = m*b + delta with 0 <= delta < b and m >= 1.
struct Decomposition {
  int m = 0;
  int delta = 0;
};

inline Decomposition decompose(const ChannelParams& p) {
  return Decomposition{(p.tau + 1) / p.b, (p.tau + 1) % p.b};
}

enum class Regime {
  kSsEquivalent,       // staggering cannot beat the 0/1 baseline
  kGsdeGain,           // b > a > (m+1)*delta > 0: proper rate gain
  kDegenerateEqualAb,  // a == b with the sharp mu case: gain formula collapses
};

inline const char* to_string(Regime regime) {
  switch (regime) {
    case Regime::kSsEquivalent: return "SS_EQUIVALENT";
    case Regime::kGsdeGain: return "GSDE_GAIN";
    case Regime::kDegenerateEqualAb: return "DEGENERATE_EQUAL_AB";
  }
  return "UNKNOWN";
}

inline Regime classify_regime(const ChannelParams& p) {
  const auto [m, delta] = decompose(p);
  const bool sharp = delta > 0 && p.a > (m + 1) * delta;
  if (!sharp) return Regime::kSsEquivalent;
  return p.a == p.b ? Regime::kDegenerateEqualAb : Regime::kGsdeGain;
}

// Upper bound for any streaming code on this channel, staggered or not.
inline Rational optimal_rate(const ChannelParams& p) {
  const std::int64_t surviving = p.tau + 1 - p.a;
  return Rational(surviving, surviving + p.b);
}

// Rate of the 0/1-dispersion baseline; defined in every regime.
inline Rational ss_rate(const ChannelParams& p) {
  const auto [m, delta] = decompose(p);
  const std::int64_t cap = std::min<std::int64_t>(delta, p.a);
  return Rational(static_cast<std::int64_t>(m - 1) * p.a + cap,
                  static_cast<std::int64_t>(m) * p.a + cap);
}

// Best rate achievable by any staggered-diagonal embedding: (m - 1 + mu) /
// (m + mu) with mu = (b - a + m*delta) / ((m+1)*b - a) in the sharp case and
// mu = min(delta, a) / a otherwise. For a == b the two branches agree.
inline Rational max_gsde_rate(const ChannelParams& p) {
  const auto [m, delta] = decompose(p);
  Rational mu;
  if (delta > 0 && p.a > (m + 1) * delta) {
    mu = Rational(p.b - p.a + static_cast<std::int64_t>(m) * delta,
                  static_cast<std::int64_t>(m + 1) * p.b - p.a);
  } else {
    mu = Rational(std::min<std::int64_t>(delta, p.a), p.a);
  }
  return (Rational(m - 1) + mu) / (Rational(m) + mu);
}

}  // namespace gss
