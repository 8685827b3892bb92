#include "gss/gf.hpp"

#include <gtest/gtest.h>

#include <cstdint>
#include <random>

using gss::Error;
using gss::ErrorCode;
using gss::Gf;

TEST(Gf, TableConstruction) {
  const Gf& field = Gf::gf256();
  EXPECT_EQ(field.order(), 256u);
  EXPECT_EQ(field.width(), 8);
  EXPECT_EQ(field.primitive_poly(), 0x11Du);
  EXPECT_EQ(Gf::gf65536().order(), 65536u);
  EXPECT_EQ(&Gf::for_order(256), &Gf::gf256());
  EXPECT_EQ(&Gf::for_order(65536), &Gf::gf65536());
  EXPECT_THROW(Gf::for_order(512), Error);
}

TEST(Gf, RejectsNonPrimitivePolynomial) {
  // x^8 + x^4 + x^3 + x + 1 is irreducible but not primitive: x has order 51.
  try {
    Gf bad(8, 0x11B);
    FAIL() << "expected rejection";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBadInput);
  }
  EXPECT_THROW(Gf(8, 0x100), Error);   // x^8, trivially composite
  EXPECT_THROW(Gf(12, 0x11D), Error);  // unsupported width
  EXPECT_THROW(Gf(8, 0x3), Error);     // degree does not match width
}

TEST(Gf, AdditionIsXor) {
  const Gf& field = Gf::gf256();
  for (int a = 0; a < 256; ++a)
    for (int b = 0; b < 256; ++b)
      ASSERT_EQ(field.add(a, b), a ^ b);
}

TEST(Gf, MultiplicationGroupExhaustive) {
  const Gf& field = Gf::gf256();
  for (unsigned a = 0; a < 256; ++a) {
    ASSERT_EQ(field.mul(a, 0), 0);
    ASSERT_EQ(field.mul(0, a), 0);
    ASSERT_EQ(field.mul(a, 1), a);
    if (a != 0) {
      const auto inv = field.inv(a);
      ASSERT_EQ(field.mul(a, inv), 1) << a;
      ASSERT_EQ(field.div(a, a), 1);
    }
    for (unsigned b = a; b < 256; ++b)
      ASSERT_EQ(field.mul(a, b), field.mul(b, a));
  }
  EXPECT_THROW(Gf::gf256().inv(0), Error);
  EXPECT_THROW(Gf::gf256().div(1, 0), Error);
}

// Associativity and distributivity over sampled triples, both widths.
TEST(Gf, RingAxiomsSampled) {
  std::mt19937_64 rng(99);
  for (const Gf* field : {&Gf::gf256(), &Gf::gf65536()}) {
    const std::uint32_t order = field->order();
    for (int trial = 0; trial < 20000; ++trial) {
      const auto a = static_cast<std::uint16_t>(rng() % order);
      const auto b = static_cast<std::uint16_t>(rng() % order);
      const auto c = static_cast<std::uint16_t>(rng() % order);
      ASSERT_EQ(field->mul(a, field->mul(b, c)), field->mul(field->mul(a, b), c));
      ASSERT_EQ(field->mul(a, field->add(b, c)),
                field->add(field->mul(a, b), field->mul(a, c)));
    }
  }
}

TEST(Gf, PowerAgreesWithRepeatedMultiplication) {
  const Gf& field = Gf::gf256();
  for (unsigned base = 0; base < 256; base += 3) {
    std::uint16_t acc = 1;
    for (unsigned e = 0; e < 520; ++e) {
      ASSERT_EQ(field.pow_of(base, e), acc) << base << "^" << e;
      acc = field.mul(acc, base);
    }
  }
  EXPECT_EQ(field.pow_of(0, 0), 1);
  EXPECT_EQ(field.pow_of(0, 5), 0);
}

TEST(Gf, GeneratorHasFullOrder) {
  const Gf& field = Gf::gf256();
  std::uint16_t x = 1;
  int period = 0;
  do {
    x = field.mul(x, 2);
    ++period;
  } while (x != 1);
  EXPECT_EQ(period, 255);
}
