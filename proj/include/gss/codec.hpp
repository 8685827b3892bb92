#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "gss/channel.hpp"
#include "gss/common.hpp"
#include "gss/dispersion.hpp"
#include "gss/error.hpp"
#include "gss/mds.hpp"

namespace gss {

// Slot map for one codeword: symbol p (0-based) of the codeword anchored at
// time s travels in packet s + offset[p] - 1, where offset[p] is the 1-based
// span slot holding it. Offsets are nondecreasing, so message symbols (the
// first k) are absorbed no later than any parity of the same codeword.
struct CodewordLayout {
  std::vector<int> offset;
  int last_occupied = 0;

  static CodewordLayout build(const DispersionVector& dv) {
    if (dv.first_slot_empty())
      fail(ErrorCode::kEmptyFirstSlot, "first span slot carries no symbols");
    CodewordLayout layout;
    for (std::size_t j = 1; j <= dv.size(); ++j) {
      for (std::int64_t c = 0; c < dv.entry(j - 1); ++c)
        layout.offset.push_back(static_cast<int>(j));
      if (dv.entry(j - 1) > 0) layout.last_occupied = static_cast<int>(j);
    }
    return layout;
  }
};

struct StreamPacket {
  std::int64_t t = 0;
  bool erased = false;
  std::vector<std::uint16_t> symbols;  // n symbols when present, empty when erased
};

enum class DecodeStatus { kOnTime, kLate, kFailed };

inline const char* to_string(DecodeStatus status) {
  switch (status) {
    case DecodeStatus::kOnTime: return "ON_TIME";
    case DecodeStatus::kLate: return "LATE";
    case DecodeStatus::kFailed: return "FAILED";
  }
  return "UNKNOWN";
}

struct DecodeEvent {
  std::int64_t t = 0;            // message time
  std::int64_t decode_time = 0;  // packet time at which the verdict landed
  DecodeStatus status = DecodeStatus::kOnTime;
  std::vector<std::uint16_t> message;  // k symbols unless FAILED
  std::vector<int> lost_positions;     // message symbol indices, FAILED only
};

// Streaming encoder: packet t carries, in slot p, symbol p of the codeword
// anchored at t - offset[p] + 1. The first k slots therefore reproduce the
// fresh message verbatim. Messages before time 0 are all-zero, which keeps
// codewords anchored before the stream well defined.
class Encoder {
 public:
  Encoder(const MdsCode& code, const DispersionVector& dispersion)
      : code_(&code), layout_(CodewordLayout::build(dispersion)) {
    if (code.n() != dispersion.total())
      fail(ErrorCode::kLengthMismatch,
           "code length " + std::to_string(code.n()) + " != dispersion total " +
               std::to_string(dispersion.total()));
    span_ = static_cast<std::int64_t>(dispersion.size());
  }

  std::int64_t next_time() const { return t_; }

  StreamPacket step(std::span<const std::uint16_t> message) {
    const int k = code_->k();
    const int n = code_->n();
    if (message.size() != static_cast<std::size_t>(k))
      fail(ErrorCode::kLengthMismatch, "message has " + std::to_string(message.size()) +
                                           " symbols, code needs " + std::to_string(k));
    for (int i = 0; i < k; ++i)
      message_of(t_ - layout_.offset[i] + 1)[i] = message[i];

    StreamPacket packet{t_, false, std::vector<std::uint16_t>(n, 0)};
    for (int p = 0; p < n; ++p)
      packet.symbols[p] =
          p < k ? message[p] : codeword_of(t_ - layout_.offset[p] + 1)[p];

    const std::int64_t oldest_needed = t_ + 2 - span_;
    messages_.erase(messages_.begin(), messages_.lower_bound(oldest_needed));
    codewords_.erase(codewords_.begin(), codewords_.lower_bound(oldest_needed));
    ++t_;
    return packet;
  }

 private:
  std::vector<std::uint16_t>& message_of(std::int64_t anchor) {
    return messages_.try_emplace(anchor, std::vector<std::uint16_t>(code_->k(), 0))
        .first->second;
  }

  // Parity is requested only after every message symbol of the anchor has
  // been absorbed (offsets are nondecreasing), so encoding once is safe.
  const std::vector<std::uint16_t>& codeword_of(std::int64_t anchor) {
    auto it = codewords_.find(anchor);
    if (it == codewords_.end())
      it = codewords_.emplace(anchor, code_->encode(message_of(anchor))).first;
    return it->second;
  }

  const MdsCode* code_;
  CodewordLayout layout_;
  std::int64_t span_ = 0;
  std::int64_t t_ = 0;
  std::map<std::int64_t, std::vector<std::uint16_t>> messages_;
  std::map<std::int64_t, std::vector<std::uint16_t>> codewords_;
};

// Streaming receiver. Unerased packets deliver their message immediately;
// erased messages are reconstructed from the codewords that cover them, each
// resolved when its last occupied slot arrives. A message is declared FAILED
// once every covering codeword has resolved without recovering it.
class Receiver {
 public:
  Receiver(const MdsCode& code, const DispersionVector& dispersion)
      : code_(&code), layout_(CodewordLayout::build(dispersion)) {
    if (code.n() != dispersion.total())
      fail(ErrorCode::kLengthMismatch,
           "code length " + std::to_string(code.n()) + " != dispersion total " +
               std::to_string(dispersion.total()));
    span_ = static_cast<std::int64_t>(dispersion.size());
    occupied_.clear();
    for (std::size_t j = 1; j <= dispersion.size(); ++j)
      if (dispersion.entry(j - 1) > 0) occupied_.push_back(static_cast<int>(j));
  }

  std::vector<DecodeEvent> step(const StreamPacket& packet) {
    if (packet.t != t_)
      fail(ErrorCode::kBadInput, "expected packet " + std::to_string(t_) + ", got " +
                                     std::to_string(packet.t));
    const int n = code_->n();
    const int k = code_->k();
    if (!packet.erased && packet.symbols.size() != static_cast<std::size_t>(n))
      fail(ErrorCode::kLengthMismatch, "packet has " + std::to_string(packet.symbols.size()) +
                                           " symbols, code length is " + std::to_string(n));
    std::vector<DecodeEvent> events;
    const std::int64_t t = t_;

    for (const int j : occupied_) touch_codeword(t - j + 1);
    message_of(t);

    if (!packet.erased) {
      for (int p = 0; p < n; ++p)
        codewords_.at(t - layout_.offset[p] + 1).symbols[p] = packet.symbols[p];
      auto& ms = messages_.at(t);
      for (int i = 0; i < k; ++i) ms.values[i] = packet.symbols[i];
      try_emit(events, t, t);
    }

    // Exactly one codeword closes per step: the one anchored here.
    const std::int64_t closing = t - layout_.last_occupied + 1;
    auto it = codewords_.find(closing);
    if (it != codewords_.end() && !it->second.resolved)
      resolve(events, closing, it->second, t);

    codewords_.erase(codewords_.begin(), codewords_.upper_bound(closing));
    messages_.erase(messages_.begin(), messages_.lower_bound(t - span_ + 2));
    ++t_;
    return events;
  }

 private:
  struct CodewordState {
    std::vector<std::optional<std::uint16_t>> symbols;
    bool resolved = false;
  };

  struct MessageState {
    std::vector<std::optional<std::uint16_t>> values;
    std::vector<char> lost;
    bool emitted = false;
  };

  void touch_codeword(std::int64_t anchor) {
    auto [it, inserted] = codewords_.try_emplace(anchor);
    if (!inserted) return;
    auto& cw = it->second;
    cw.symbols.assign(code_->n(), std::nullopt);
    // Slots landing before the stream belong to all-zero virtual packets.
    if (anchor < 0)
      for (int p = 0; p < code_->n(); ++p)
        if (anchor + layout_.offset[p] - 1 < 0) cw.symbols[p] = 0;
  }

  MessageState& message_of(std::int64_t t) {
    auto [it, inserted] = messages_.try_emplace(t);
    if (inserted) {
      it->second.values.assign(code_->k(), std::nullopt);
      it->second.lost.assign(code_->k(), 0);
    }
    return it->second;
  }

  void resolve(std::vector<DecodeEvent>& events, std::int64_t anchor, CodewordState& cw,
               std::int64_t now) {
    cw.resolved = true;
    const int k = code_->k();
    int missing = 0;
    bool message_missing = false;
    for (int p = 0; p < code_->n(); ++p)
      if (!cw.symbols[p]) {
        ++missing;
        if (p < k) message_missing = true;
      }
    if (!message_missing) return;  // every message symbol arrived in its own packet

    std::vector<std::int64_t> touched;
    if (missing <= code_->n() - k) {
      const auto decoded = code_->erasure_decode(cw.symbols);
      for (int i = 0; i < k; ++i) {
        if (cw.symbols[i]) continue;
        const std::int64_t u = anchor + layout_.offset[i] - 1;
        if (u < 0) continue;
        auto& ms = message_of(u);
        if (!ms.values[i]) {
          ms.values[i] = decoded[i];
          touched.push_back(u);
        }
      }
    } else {
      for (int i = 0; i < k; ++i) {
        if (cw.symbols[i]) continue;
        const std::int64_t u = anchor + layout_.offset[i] - 1;
        if (u < 0) continue;
        auto& ms = message_of(u);
        if (!ms.lost[i]) {
          ms.lost[i] = 1;
          touched.push_back(u);
        }
      }
    }
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    for (const auto u : touched) try_emit(events, u, now);
  }

  void try_emit(std::vector<DecodeEvent>& events, std::int64_t t, std::int64_t now) {
    auto& ms = messages_.at(t);
    if (ms.emitted) return;
    const int k = code_->k();
    int known = 0;
    int lost = 0;
    for (int i = 0; i < k; ++i) {
      if (ms.values[i]) ++known;
      if (ms.lost[i]) ++lost;
    }
    DecodeEvent event;
    event.t = t;
    event.decode_time = now;
    if (known == k) {
      event.status = now <= t + span_ - 1 ? DecodeStatus::kOnTime : DecodeStatus::kLate;
      event.message.resize(k);
      for (int i = 0; i < k; ++i) event.message[i] = *ms.values[i];
    } else if (known + lost == k) {
      event.status = DecodeStatus::kFailed;
      for (int i = 0; i < k; ++i)
        if (ms.lost[i]) event.lost_positions.push_back(i);
    } else {
      return;
    }
    ms.emitted = true;
    events.push_back(std::move(event));
  }

  const MdsCode* code_;
  CodewordLayout layout_;
  std::int64_t span_ = 0;
  std::vector<int> occupied_;
  std::int64_t t_ = 0;
  std::map<std::int64_t, CodewordState> codewords_;
  std::map<std::int64_t, MessageState> messages_;
};

struct VerifyResult {
  bool pass = true;
  std::uint64_t patterns_checked = 0;
  std::optional<ErasurePattern> counterexample;
  std::int64_t failing_time = -1;
  std::string detail;
};

// Runs the codec against every admissible pattern on [0, horizon) with random
// message streams, checking that every message whose deadline lies inside the
// horizon is recovered on time and intact. Patterns arrive in lexicographic
// order, so a FAIL reports the lex-least counterexample.
inline VerifyResult verify_exhaustive(const ChannelParams& params,
                                      const DispersionVector& dispersion,
                                      const MdsCode& code, std::int64_t horizon,
                                      bool maximal_only = false,
                                      std::uint64_t budget = kDefaultBudget,
                                      std::uint64_t message_seed = kDefaultSeed) {
  if (horizon < params.window())
    fail(ErrorCode::kBadInput, "horizon must be at least tau + 1 = " +
                                   std::to_string(params.window()));
  if (code.n() != dispersion.total())
    fail(ErrorCode::kLengthMismatch, "code length != dispersion total");
  const std::int64_t scored_end = horizon - params.tau;
  VerifyResult result;
  std::uint64_t pattern_index = 0;

  enumerate_admissible(
      params, horizon,
      [&](const ErasurePattern& pattern) {
        const std::uint64_t index = pattern_index++;
        ++result.patterns_checked;
        if (!result.pass) return;

        std::mt19937_64 rng(mix_seed(message_seed, index));
        Encoder encoder(code, dispersion);
        Receiver receiver(code, dispersion);
        std::vector<std::vector<std::uint16_t>> sent(horizon);
        std::vector<char> recovered(std::max<std::int64_t>(scored_end, 0), 0);

        for (std::int64_t t = 0; t < horizon; ++t) {
          sent[t].resize(code.k());
          for (auto& s : sent[t])
            s = static_cast<std::uint16_t>(rng() % code.field().order());
          StreamPacket packet = encoder.step(sent[t]);
          if (pattern.contains(t)) {
            packet.erased = true;
            packet.symbols.clear();
          }
          for (const auto& event : receiver.step(packet)) {
            if (event.t < 0 || event.t >= scored_end) continue;
            if (event.status == DecodeStatus::kOnTime && event.message == sent[event.t])
              recovered[event.t] = 1;
          }
        }
        for (std::int64_t t = 0; t < scored_end; ++t) {
          if (recovered[t]) continue;
          result.pass = false;
          result.counterexample = pattern;
          result.failing_time = t;
          result.detail = "message " + std::to_string(t) +
                          " not recovered on time under pattern {" + pattern.to_text() + "}";
          break;
        }
      },
      maximal_only, budget);
  return result;
}

}  // namespace gss
