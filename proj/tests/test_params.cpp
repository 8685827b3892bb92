#include "gss/params.hpp"

#include <gtest/gtest.h>

using gss::ChannelParams;
using gss::classify_regime;
using gss::decompose;
using gss::Error;
using gss::ErrorCode;
using gss::max_gsde_rate;
using gss::optimal_rate;
using gss::Rational;
using gss::Regime;
using gss::ss_rate;

TEST(Params, Validation) {
  EXPECT_NO_THROW(ChannelParams::make(1, 1, 1));
  EXPECT_NO_THROW(ChannelParams::make(3, 5, 5));
  for (auto [a, b, tau] : {std::tuple{0, 1, 1}, {2, 1, 2}, {1, 3, 2}, {-1, 1, 1}}) {
    try {
      ChannelParams::make(a, b, tau);
      FAIL() << "expected rejection of (" << a << "," << b << "," << tau << ")";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kInvalidParams);
    }
  }
}

TEST(Params, Decomposition) {
  auto d = decompose(ChannelParams{3, 5, 5});
  EXPECT_EQ(d.m, 1);
  EXPECT_EQ(d.delta, 1);
  d = decompose(ChannelParams{4, 5, 10});
  EXPECT_EQ(d.m, 2);
  EXPECT_EQ(d.delta, 1);
  d = decompose(ChannelParams{1, 1, 1});
  EXPECT_EQ(d.m, 2);
  EXPECT_EQ(d.delta, 0);
  d = decompose(ChannelParams{10, 18, 20});
  EXPECT_EQ(d.m, 1);
  EXPECT_EQ(d.delta, 3);
}

TEST(Params, ReferenceRates) {
  struct Case {
    ChannelParams params;
    Rational optimal, baseline, staggered;
  };
  const Case cases[] = {
      {{3, 5, 5}, {3, 8}, {1, 4}, {3, 10}},
      {{4, 5, 10}, {7, 12}, {5, 9}, {14, 25}},
      {{5, 8, 16}, {3, 5}, {6, 11}, {24, 43}},
      {{9, 15, 15}, {7, 22}, {1, 10}, {1, 4}},
      {{10, 18, 20}, {11, 29}, {3, 13}, {11, 37}},
  };
  for (const auto& c : cases) {
    EXPECT_EQ(optimal_rate(c.params), c.optimal) << c.params.label();
    EXPECT_EQ(ss_rate(c.params), c.baseline) << c.params.label();
    EXPECT_EQ(max_gsde_rate(c.params), c.staggered) << c.params.label();
  }
}

TEST(Params, RegimeClassification) {
  EXPECT_EQ(classify_regime(ChannelParams{3, 5, 5}), Regime::kGsdeGain);
  EXPECT_EQ(classify_regime(ChannelParams{4, 5, 10}), Regime::kGsdeGain);
  EXPECT_EQ(classify_regime(ChannelParams{1, 1, 1}), Regime::kSsEquivalent);
  EXPECT_EQ(classify_regime(ChannelParams{2, 3, 5}), Regime::kSsEquivalent);
  EXPECT_EQ(classify_regime(ChannelParams{4, 4, 8}), Regime::kDegenerateEqualAb);
}

TEST(Params, DegenerateEqualAbCollapsesToBaseline) {
  const ChannelParams p{4, 4, 8};
  EXPECT_EQ(max_gsde_rate(p), ss_rate(p));
  EXPECT_EQ(ss_rate(p), Rational(5, 9));
}

// mu's two branches agree whenever a == b, so the formula is well defined on
// the boundary.
TEST(Params, MuBranchesAgreeOnEqualAb) {
  for (int tau = 1; tau <= 24; ++tau)
    for (int a = 1; a <= tau; ++a) {
      const ChannelParams p{a, a, tau};
      const auto [m, delta] = decompose(p);
      if (!(delta > 0 && a > (m + 1) * delta)) continue;
      const Rational sharp(p.b - p.a + static_cast<std::int64_t>(m) * delta,
                           static_cast<std::int64_t>(m + 1) * p.b - p.a);
      const Rational plain(std::min(delta, a), a);
      EXPECT_EQ(sharp, plain) << p.label();
    }
}

TEST(Params, RateOrderingSweep) {
  for (int tau = 1; tau <= 30; ++tau)
    for (int b = 1; b <= tau; ++b)
      for (int a = 1; a <= b; ++a) {
        const ChannelParams p{a, b, tau};
        const auto [m, delta] = decompose(p);
        EXPECT_EQ(m * b + delta, tau + 1);
        EXPECT_GE(m, 1);
        const Rational lo = ss_rate(p);
        const Rational mid = max_gsde_rate(p);
        const Rational hi = optimal_rate(p);
        EXPECT_LE(lo, mid) << p.label();
        EXPECT_LE(mid, hi) << p.label();
        const bool gains = mid > lo;
        const Regime regime = classify_regime(p);
        EXPECT_EQ(gains, regime == Regime::kGsdeGain) << p.label();
        if (regime == Regime::kDegenerateEqualAb) EXPECT_EQ(mid, lo) << p.label();
      }
}

TEST(Params, Label) {
  EXPECT_EQ((ChannelParams{3, 5, 5}).label(), "(3,5,5)");
}
