#include "gss/codec.hpp"

#include <gtest/gtest.h>

#include <cstdint>
#include <map>
#include <random>
#include <vector>

using gss::best_dispersion;
using gss::ChannelParams;
using gss::CodewordLayout;
using gss::DecodeEvent;
using gss::DecodeStatus;
using gss::DispersionVector;
using gss::Encoder;
using gss::ErasurePattern;
using gss::Error;
using gss::ErrorCode;
using gss::Gf;
using gss::MdsCode;
using gss::Receiver;
using gss::StreamPacket;
using gss::verify_exhaustive;

namespace {

struct Stream {
  std::vector<std::vector<std::uint16_t>> sent;
  std::map<std::int64_t, DecodeEvent> events;
};

// Runs `horizon` packets through encoder and receiver, erasing the pattern's
// slots, and indexes the decode events by message time.
Stream run_stream(const MdsCode& code, const DispersionVector& dv,
                  const ErasurePattern& pattern, std::uint64_t seed = 7) {
  Stream out;
  Encoder encoder(code, dv);
  Receiver receiver(code, dv);
  std::mt19937_64 rng(seed);
  for (std::int64_t t = 0; t < pattern.horizon; ++t) {
    std::vector<std::uint16_t> message(code.k());
    for (auto& s : message) s = static_cast<std::uint16_t>(rng() % code.field().order());
    out.sent.push_back(message);
    StreamPacket packet = encoder.step(message);
    if (pattern.contains(t)) {
      packet.erased = true;
      packet.symbols.clear();
    }
    for (const auto& event : receiver.step(packet)) {
      EXPECT_EQ(out.events.count(event.t), 0u) << "duplicate event for " << event.t;
      out.events[event.t] = event;
    }
  }
  return out;
}

MdsCode code_for(const DispersionVector& dv, std::int64_t r) {
  return MdsCode::build(static_cast<int>(dv.total()), static_cast<int>(dv.total() - r),
                        Gf::gf256());
}

}  // namespace

TEST(CodewordLayout, ReferenceLayouts) {
  auto layout = CodewordLayout::build(DispersionVector({3, 1, 1, 1, 1, 3}));
  EXPECT_EQ(layout.offset, (std::vector<int>{1, 1, 1, 2, 3, 4, 5, 6, 6, 6}));
  EXPECT_EQ(layout.last_occupied, 6);

  layout = CodewordLayout::build(DispersionVector({1, 1, 1, 0, 0, 1}));
  EXPECT_EQ(layout.offset, (std::vector<int>{1, 2, 3, 6}));
  EXPECT_EQ(layout.last_occupied, 6);

  try {
    CodewordLayout::build(DispersionVector({0, 1, 1}));
    FAIL() << "expected EMPTY_FIRST_SLOT";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyFirstSlot);
  }
}

TEST(Encoder, SystematicPrefixAndZeroStream) {
  const DispersionVector dv({3, 1, 1, 1, 1, 3});
  const MdsCode code = code_for(dv, 7);
  Encoder encoder(code, dv);
  std::mt19937_64 rng(5);
  for (std::int64_t t = 0; t < 40; ++t) {
    std::vector<std::uint16_t> message(3);
    for (auto& s : message) s = static_cast<std::uint16_t>(rng() % 256);
    const StreamPacket packet = encoder.step(message);
    EXPECT_EQ(packet.t, t);
    ASSERT_EQ(packet.symbols.size(), 10u);
    EXPECT_EQ(std::vector<std::uint16_t>(packet.symbols.begin(), packet.symbols.begin() + 3),
              message);
  }

  Encoder zero_encoder(code, dv);
  for (std::int64_t t = 0; t < 20; ++t) {
    const auto packet = zero_encoder.step(std::vector<std::uint16_t>(3, 0));
    for (const auto s : packet.symbols) ASSERT_EQ(s, 0);
  }
}

// A single nonzero message at t = 0 surfaces exactly as the MDS codeword of
// that message, spread per the layout; everything else stays zero.
TEST(Encoder, ImpulseMatchesBlockEncoder) {
  const DispersionVector dv({3, 1, 1, 1, 1, 3});
  const MdsCode code = code_for(dv, 7);
  const auto layout = CodewordLayout::build(dv);
  Encoder encoder(code, dv);
  const std::vector<std::uint16_t> impulse = {101, 202, 55};
  const auto expected = code.encode(impulse);

  std::vector<StreamPacket> packets;
  packets.push_back(encoder.step(impulse));
  for (std::int64_t t = 1; t < 12; ++t)
    packets.push_back(encoder.step(std::vector<std::uint16_t>(3, 0)));

  std::vector<std::uint16_t> seen(10, 0xFFFF);
  for (int p = 0; p < 10; ++p) seen[p] = packets[layout.offset[p] - 1].symbols[p];
  EXPECT_EQ(seen, expected);

  for (const auto& packet : packets) {
    for (int p = 0; p < 10; ++p) {
      const std::int64_t anchor = packet.t - layout.offset[p] + 1;
      if (anchor != 0) {
        ASSERT_EQ(packet.symbols[p], 0) << "t=" << packet.t << " p=" << p;
      }
    }
  }
}

TEST(Encoder, InputValidation) {
  const DispersionVector dv({3, 1, 1, 1, 1, 3});
  const MdsCode code = code_for(dv, 7);
  Encoder encoder(code, dv);
  EXPECT_THROW(encoder.step(std::vector<std::uint16_t>{1, 2}), Error);
  EXPECT_THROW(Encoder(MdsCode::build(9, 3, Gf::gf256()), dv), Error);
}

TEST(Receiver, CleanStreamDeliversImmediately) {
  const DispersionVector dv({3, 1, 1, 1, 1, 3});
  const MdsCode code = code_for(dv, 7);
  const auto stream = run_stream(code, dv, ErasurePattern::make(20, {}));
  for (std::int64_t t = 0; t < 20; ++t) {
    ASSERT_TRUE(stream.events.count(t));
    const auto& event = stream.events.at(t);
    EXPECT_EQ(event.status, DecodeStatus::kOnTime);
    EXPECT_EQ(event.decode_time, t);
    EXPECT_EQ(event.message, stream.sent[t]);
  }
}

// Worst admissible burst: packets 0..4 lost, every message still on time.
// The erased messages decode exactly when their codewords close.
TEST(Receiver, RecoversFullBurst) {
  const DispersionVector dv({3, 1, 1, 1, 1, 3});
  const MdsCode code = code_for(dv, 7);
  const auto stream = run_stream(code, dv, ErasurePattern::make(14, {0, 1, 2, 3, 4}));
  for (std::int64_t t = 0; t < 14; ++t) {
    ASSERT_TRUE(stream.events.count(t)) << t;
    const auto& event = stream.events.at(t);
    EXPECT_EQ(event.status, DecodeStatus::kOnTime) << t;
    EXPECT_EQ(event.message, stream.sent[t]) << t;
    EXPECT_LE(event.decode_time, t + 5) << t;
    if (t <= 4) {
      EXPECT_EQ(event.decode_time, t + 5) << t;
    }
  }
}

TEST(Receiver, ScatteredAdmissibleErasures) {
  const DispersionVector dv({3, 1, 1, 1, 1, 3});
  const MdsCode code = code_for(dv, 7);
  const auto stream = run_stream(code, dv, ErasurePattern::make(18, {2, 5, 9, 12}));
  for (std::int64_t t = 0; t < 18; ++t) {
    ASSERT_TRUE(stream.events.count(t)) << t;
    EXPECT_EQ(stream.events.at(t).status, DecodeStatus::kOnTime) << t;
    EXPECT_EQ(stream.events.at(t).message, stream.sent[t]) << t;
  }
}

// Six consecutive erasures exceed every protection branch; the buried
// messages fail with their lost slots reported, and the stream recovers after.
TEST(Receiver, InadmissibleBurstFailsCleanly) {
  const DispersionVector dv({3, 1, 1, 1, 1, 3});
  const MdsCode code = code_for(dv, 7);
  const auto stream = run_stream(code, dv, ErasurePattern::make(16, {0, 1, 2, 3, 4, 5}));
  int failed = 0;
  for (std::int64_t t = 0; t < 10; ++t) {
    ASSERT_TRUE(stream.events.count(t)) << t;
    const auto& event = stream.events.at(t);
    if (event.status == DecodeStatus::kFailed) {
      ++failed;
      EXPECT_LE(t, 5);
      EXPECT_EQ(event.lost_positions, (std::vector<int>{0, 1, 2}));
    } else {
      EXPECT_EQ(event.status, DecodeStatus::kOnTime);
      EXPECT_EQ(event.message, stream.sent[t]);
    }
  }
  EXPECT_GT(failed, 0);
}

// With k > n_1 a message rides in several packets; check the slot identity
// and burst recovery for the (4,5,10) weighted code [25, 14].
TEST(Receiver, MultiPacketMessages) {
  const ChannelParams params{4, 5, 10};
  const auto construction = best_dispersion(params);
  const DispersionVector& dv = construction.vector;
  ASSERT_EQ(dv.total(), 25);
  ASSERT_EQ(construction.report.r, 11);
  const MdsCode code = code_for(dv, 11);
  ASSERT_EQ(code.k(), 14);

  const auto clean = run_stream(code, dv, ErasurePattern::make(26, {}));
  for (std::int64_t t = 0; t < 26; ++t) {
    ASSERT_TRUE(clean.events.count(t)) << t;
    EXPECT_EQ(clean.events.at(t).message, clean.sent[t]) << t;
  }

  const auto burst = run_stream(code, dv, ErasurePattern::make(26, {3, 4, 5, 6, 7}));
  for (std::int64_t t = 0; t < 15; ++t) {
    ASSERT_TRUE(burst.events.count(t)) << t;
    EXPECT_EQ(burst.events.at(t).status, DecodeStatus::kOnTime) << t;
    EXPECT_EQ(burst.events.at(t).message, burst.sent[t]) << t;
    EXPECT_LE(burst.events.at(t).decode_time, t + 10) << t;
  }
}

TEST(Receiver, DeterministicReplay) {
  const DispersionVector dv({3, 1, 1, 1, 1, 3});
  const MdsCode code = code_for(dv, 7);
  const auto pattern = ErasurePattern::make(15, {1, 2, 3, 4, 5});
  const auto first = run_stream(code, dv, pattern, 99);
  const auto second = run_stream(code, dv, pattern, 99);
  ASSERT_EQ(first.events.size(), second.events.size());
  for (const auto& [t, event] : first.events) {
    const auto& other = second.events.at(t);
    EXPECT_EQ(event.status, other.status);
    EXPECT_EQ(event.decode_time, other.decode_time);
    EXPECT_EQ(event.message, other.message);
  }
}

TEST(Receiver, RejectsOutOfOrderPackets) {
  const DispersionVector dv({3, 1, 1, 1, 1, 3});
  const MdsCode code = code_for(dv, 7);
  Receiver receiver(code, dv);
  StreamPacket wrong;
  wrong.t = 3;
  wrong.erased = true;
  EXPECT_THROW(receiver.step(wrong), Error);
}

TEST(VerifyExhaustive, PassesForBothConstructions) {
  const ChannelParams params{3, 5, 5};
  const auto weighted = best_dispersion(params);
  const auto result =
      verify_exhaustive(params, weighted.vector, code_for(weighted.vector, 7), 10);
  EXPECT_TRUE(result.pass);
  EXPECT_GT(result.patterns_checked, 100u);

  const auto baseline = gss::construction1(params);
  const auto base_result =
      verify_exhaustive(params, baseline.vector, code_for(baseline.vector, 3), 10);
  EXPECT_TRUE(base_result.pass);
  EXPECT_EQ(base_result.patterns_checked, result.patterns_checked);
}

// A code with too little redundancy must be caught, and the lex-least
// counterexample is the opening burst.
TEST(VerifyExhaustive, WeakenedCodeYieldsCounterexample) {
  const ChannelParams params{3, 5, 5};
  const auto weighted = best_dispersion(params);
  const MdsCode weak = MdsCode::build(10, 4, Gf::gf256());
  const auto result = verify_exhaustive(params, weighted.vector, weak, 12);
  EXPECT_FALSE(result.pass);
  ASSERT_TRUE(result.counterexample.has_value());
  EXPECT_EQ(result.counterexample->erased, (std::vector<std::int64_t>{0, 1, 2, 3, 4}));
  EXPECT_EQ(result.failing_time, 0);
}

TEST(VerifyExhaustive, MaximalOnlyAgrees) {
  const ChannelParams params{3, 5, 5};
  const auto weighted = best_dispersion(params);
  const auto full =
      verify_exhaustive(params, weighted.vector, code_for(weighted.vector, 7), 9);
  const auto maximal =
      verify_exhaustive(params, weighted.vector, code_for(weighted.vector, 7), 9, true);
  EXPECT_TRUE(full.pass);
  EXPECT_TRUE(maximal.pass);
  EXPECT_LT(maximal.patterns_checked, full.patterns_checked);
}

// Every covering codeword resolves no later than t + span - 1, so a message
// is either on time or failed; the late verdict can never fire.
TEST(Receiver, NeverEmitsLate) {
  const DispersionVector dv({3, 1, 1, 1, 1, 3});
  const MdsCode code = code_for(dv, 7);
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::int64_t> erased;
    for (std::int64_t t = 0; t < 15; ++t)
      if (rng() % 3 == 0) erased.push_back(t);
    const auto stream = run_stream(code, dv, ErasurePattern::make(15, erased), rng());
    for (const auto& [t, event] : stream.events)
      ASSERT_NE(event.status, DecodeStatus::kLate);
  }
}

TEST(VerifyExhaustive, HorizonValidation) {
  const ChannelParams params{3, 5, 5};
  const auto weighted = best_dispersion(params);
  try {
    verify_exhaustive(params, weighted.vector, code_for(weighted.vector, 7), 4);
    FAIL() << "expected BAD_INPUT";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBadInput);
  }
}
