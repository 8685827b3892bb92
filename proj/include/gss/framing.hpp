#pragma once

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "gss/codec.hpp"
#include "gss/error.hpp"
#include "gss/params.hpp"

namespace gss {

// Byte-exact stream container. Big-endian throughout:
//   magic "GSS1" | a u16 | b u16 | tau u16 | tau+1 dispersion entries u16 |
//   field order u32 | per packet: time u32, flag u8 (0 present, 1 erased),
//   then n symbol bytes when present.
// Symbols are single bytes, so only field order <= 256 is representable.
inline bool operator==(const StreamPacket& x, const StreamPacket& y) {
  return x.t == y.t && x.erased == y.erased && x.symbols == y.symbols;
}

struct StreamFile {
  ChannelParams params;
  std::vector<std::int64_t> dispersion;
  std::uint32_t field_order = 256;
  std::vector<StreamPacket> packets;

  friend bool operator==(const StreamFile&, const StreamFile&) = default;
};

namespace detail {

inline void put_u16(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

inline void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

class ByteReader {
 public:
  explicit ByteReader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

  std::uint8_t u8() {
    need(1);
    return bytes_[pos_++];
  }
  std::uint32_t u16() {
    need(2);
    const std::uint32_t v = (static_cast<std::uint32_t>(bytes_[pos_]) << 8) | bytes_[pos_ + 1];
    pos_ += 2;
    return v;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | bytes_[pos_ + i];
    pos_ += 4;
    return v;
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  void need(std::size_t count) {
    if (pos_ + count > bytes_.size())
      fail(ErrorCode::kBadInput, "stream file truncated at byte " + std::to_string(pos_));
  }

  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline std::vector<std::uint8_t> write_stream(const StreamFile& stream) {
  const auto& p = stream.params;
  if (p.tau > 0xFFFF || p.b > 0xFFFF || p.a > 0xFFFF)
    fail(ErrorCode::kBadInput, "channel parameters exceed 16-bit range");
  if (stream.dispersion.size() != static_cast<std::size_t>(p.window()))
    fail(ErrorCode::kLengthMismatch, "dispersion length != tau + 1");
  if (stream.field_order > 256)
    fail(ErrorCode::kBadInput, "byte framing supports field order <= 256");
  const std::int64_t n =
      std::accumulate(stream.dispersion.begin(), stream.dispersion.end(), std::int64_t{0});

  std::vector<std::uint8_t> out = {'G', 'S', 'S', '1'};
  detail::put_u16(out, static_cast<std::uint32_t>(p.a));
  detail::put_u16(out, static_cast<std::uint32_t>(p.b));
  detail::put_u16(out, static_cast<std::uint32_t>(p.tau));
  for (const auto e : stream.dispersion) {
    if (e < 0 || e > 0xFFFF)
      fail(ErrorCode::kBadInput, "dispersion entry " + std::to_string(e) + " out of u16 range");
    detail::put_u16(out, static_cast<std::uint32_t>(e));
  }
  detail::put_u32(out, stream.field_order);

  for (const auto& packet : stream.packets) {
    if (packet.t < 0 || packet.t > 0xFFFFFFFFll)
      fail(ErrorCode::kBadInput, "packet time out of u32 range");
    detail::put_u32(out, static_cast<std::uint32_t>(packet.t));
    out.push_back(packet.erased ? 1 : 0);
    if (packet.erased) {
      if (!packet.symbols.empty())
        fail(ErrorCode::kBadInput, "erased packet must carry no symbols");
      continue;
    }
    if (packet.symbols.size() != static_cast<std::size_t>(n))
      fail(ErrorCode::kLengthMismatch, "packet " + std::to_string(packet.t) + " has " +
                                           std::to_string(packet.symbols.size()) +
                                           " symbols, dispersion total is " + std::to_string(n));
    for (const auto s : packet.symbols) {
      if (s >= stream.field_order)
        fail(ErrorCode::kBadInput, "symbol " + std::to_string(s) + " outside field");
      out.push_back(static_cast<std::uint8_t>(s));
    }
  }
  return out;
}

inline StreamFile read_stream(const std::vector<std::uint8_t>& bytes) {
  detail::ByteReader reader(bytes);
  if (reader.u8() != 'G' || reader.u8() != 'S' || reader.u8() != 'S' || reader.u8() != '1')
    fail(ErrorCode::kBadInput, "bad magic, not a GSS1 stream");
  const int a = static_cast<int>(reader.u16());
  const int b = static_cast<int>(reader.u16());
  const int tau = static_cast<int>(reader.u16());
  StreamFile stream;
  stream.params = ChannelParams::make(a, b, tau);
  std::int64_t n = 0;
  for (int i = 0; i < stream.params.window(); ++i) {
    stream.dispersion.push_back(reader.u16());
    n += stream.dispersion.back();
  }
  stream.field_order = reader.u32();
  if (stream.field_order > 256)
    fail(ErrorCode::kBadInput, "byte framing supports field order <= 256");
  while (!reader.done()) {
    StreamPacket packet;
    packet.t = reader.u32();
    const std::uint8_t flag = reader.u8();
    if (flag > 1) fail(ErrorCode::kBadInput, "bad packet flag " + std::to_string(flag));
    packet.erased = flag == 1;
    if (!packet.erased) {
      packet.symbols.reserve(n);
      for (std::int64_t i = 0; i < n; ++i)
        packet.symbols.push_back(reader.u8());
    }
    stream.packets.push_back(std::move(packet));
  }
  return stream;
}

}  // namespace gss
