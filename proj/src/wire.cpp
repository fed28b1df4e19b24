#include "lorecos/wire.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <utility>

namespace lorecos {
namespace {

constexpr std::uint8_t kFlagL = 0x01;
constexpr std::uint8_t kFlagH = 0x02;

class Writer {
 public:
  explicit Writer(std::size_t size) { out_.reserve(size); }

  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v) {
    out_.push_back(static_cast<std::uint8_t>(v >> 8));
    out_.push_back(static_cast<std::uint8_t>(v));
  }
  void u32(std::uint32_t v) {
    for (int shift = 24; shift >= 0; shift -= 8) {
      out_.push_back(static_cast<std::uint8_t>(v >> shift));
    }
  }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void zeros(std::size_t n) { out_.insert(out_.end(), n, 0); }
  void bytes(std::span<const std::uint8_t> b) { out_.insert(out_.end(), b.begin(), b.end()); }

  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  std::uint8_t u8(std::size_t at) const { return in_[at]; }
  std::uint16_t u16(std::size_t at) const {
    return static_cast<std::uint16_t>((in_[at] << 8) | in_[at + 1]);
  }
  std::uint32_t u32(std::size_t at) const {
    return (static_cast<std::uint32_t>(in_[at]) << 24) | (static_cast<std::uint32_t>(in_[at + 1]) << 16) |
           (static_cast<std::uint32_t>(in_[at + 2]) << 8) | static_cast<std::uint32_t>(in_[at + 3]);
  }
  float f32(std::size_t at) const { return std::bit_cast<float>(u32(at)); }
  bool all_zero(std::size_t at, std::size_t n) const {
    for (std::size_t i = at; i < at + n; ++i) {
      if (in_[i] != 0) return false;
    }
    return true;
  }

 private:
  std::span<const std::uint8_t> in_;
};

DecodeError error(DecodeError::Kind kind, std::string detail) { return DecodeError{kind, std::move(detail)}; }

bool needs_distinct_endpoints(PacketType type) {
  return type == PacketType::kRreq || type == PacketType::kConnect || type == PacketType::kEvent;
}

void check_encodable(const WirePacket& p) {
  switch (p.type) {
    case PacketType::kRreq:
      if (p.flags.hello) throw EncodeError("RREQ carries only the L flag");
      break;
    case PacketType::kRrep:
      break;
    case PacketType::kConnect:
      if (p.flags.location || p.flags.hello) throw EncodeError("CONNECT carries no flags");
      break;
    case PacketType::kEvent:
      if (p.flags.hello) throw EncodeError("EVENT carries only the L flag");
      if (p.payload.size() > std::numeric_limits<std::uint16_t>::max()) {
        throw EncodeError("EVENT payload exceeds 65535 bytes");
      }
      break;
    default:
      throw EncodeError("unknown packet type");
  }
  if (needs_distinct_endpoints(p.type) && p.orig == p.dest) {
    throw EncodeError(std::string(to_string(p.type)) + " with orig == dest");
  }
  if (p.flags.location && !(std::isfinite(p.xloc) && std::isfinite(p.yloc))) {
    throw EncodeError("non-finite location with L set");
  }
}

void write_location(Writer& w, const WirePacket& p) {
  if (p.flags.location) {
    w.f32(p.xloc);
    w.f32(p.yloc);
  } else {
    w.zeros(kLocationSize);
  }
}

}  // namespace

std::string_view to_string(PacketType type) {
  switch (type) {
    case PacketType::kRreq: return "RREQ";
    case PacketType::kRrep: return "RREP";
    case PacketType::kConnect: return "CONNECT";
    case PacketType::kEvent: return "EVENT";
  }
  return "UNKNOWN";
}

std::string_view to_string(DecodeError::Kind kind) {
  switch (kind) {
    case DecodeError::Kind::kTruncated: return "truncated";
    case DecodeError::Kind::kTrailingBytes: return "trailing bytes";
    case DecodeError::Kind::kUnknownType: return "unknown type";
    case DecodeError::Kind::kReservedBits: return "reserved bits set";
    case DecodeError::Kind::kNonFiniteLocation: return "non-finite location";
    case DecodeError::Kind::kInvalidAddress: return "invalid address";
  }
  return "unknown";
}

void WirePacket::set_location(Position p) {
  flags.location = true;
  xloc = static_cast<float>(p.x);
  yloc = static_cast<float>(p.y);
}

void WirePacket::clear_location() {
  flags.location = false;
  xloc = 0.0f;
  yloc = 0.0f;
}

bool operator==(const WirePacket& a, const WirePacket& b) {
  if (a.type != b.type || a.flags != b.flags || a.dest != b.dest || a.orig != b.orig) return false;
  if (a.flags.location && (a.xloc != b.xloc || a.yloc != b.yloc)) return false;
  if (a.type == PacketType::kRreq && a.rreq_id != b.rreq_id) return false;
  if (a.type == PacketType::kEvent && (a.seq != b.seq || a.payload != b.payload)) return false;
  return true;
}

WirePacket make_rreq(NodeId orig, NodeId dest, std::uint32_t rreq_id) {
  WirePacket p;
  p.type = PacketType::kRreq;
  p.orig = orig;
  p.dest = dest;
  p.rreq_id = rreq_id;
  return p;
}

WirePacket make_rrep(NodeId orig, NodeId dest) {
  WirePacket p;
  p.type = PacketType::kRrep;
  p.orig = orig;
  p.dest = dest;
  return p;
}

WirePacket make_hello_request(NodeId requester) {
  WirePacket p = make_rrep(requester, kNoNode);
  p.flags.hello = true;
  return p;
}

WirePacket make_hello_reply(NodeId replier, NodeId requester, Position own) {
  WirePacket p = make_rrep(replier, requester);
  p.set_location(own);
  return p;
}

WirePacket make_connect(NodeId orig, NodeId dest) {
  WirePacket p;
  p.type = PacketType::kConnect;
  p.orig = orig;
  p.dest = dest;
  return p;
}

WirePacket make_event(NodeId orig, NodeId dest, std::uint32_t seq, std::vector<std::uint8_t> payload) {
  WirePacket p;
  p.type = PacketType::kEvent;
  p.orig = orig;
  p.dest = dest;
  p.seq = seq;
  p.payload = std::move(payload);
  return p;
}

std::size_t encoded_size(const WirePacket& packet) {
  switch (packet.type) {
    case PacketType::kRreq:
    case PacketType::kRrep: return kRouteMessageSize;
    case PacketType::kConnect: return kConnectSize;
    case PacketType::kEvent:
      return kEventHeaderSize + (packet.flags.location ? kLocationSize : 0) + packet.payload.size();
  }
  return 0;
}

std::vector<std::uint8_t> encode(const WirePacket& p) {
  check_encodable(p);
  Writer w(encoded_size(p));
  w.u8(static_cast<std::uint8_t>(p.type));
  w.u8(p.flags.bits());
  w.zeros(2);
  switch (p.type) {
    case PacketType::kRreq:
      w.u32(p.rreq_id);
      w.u32(p.dest);
      w.u32(p.orig);
      write_location(w, p);
      break;
    case PacketType::kRrep:
      w.u32(p.dest);
      w.u32(p.orig);
      w.zeros(4);
      write_location(w, p);
      break;
    case PacketType::kConnect:
      w.u32(p.dest);
      w.u32(p.orig);
      break;
    case PacketType::kEvent:
      w.u32(p.dest);
      w.u32(p.orig);
      w.u32(p.seq);
      w.u16(static_cast<std::uint16_t>(p.payload.size()));
      if (p.flags.location) {
        w.f32(p.xloc);
        w.f32(p.yloc);
      }
      w.bytes(p.payload);
      break;
  }
  return w.take();
}

DecodeResult decode(std::span<const std::uint8_t> bytes) {
  using K = DecodeError::Kind;
  if (bytes.size() < 4) return error(K::kTruncated, "buffer shorter than the common header");

  Reader r(bytes);
  const std::uint8_t code = r.u8(0);
  const std::uint8_t flag_bits = r.u8(1);

  WirePacket p;
  std::size_t expected = 0;
  std::uint8_t allowed_flags = 0;
  switch (code) {
    case 1:
      p.type = PacketType::kRreq;
      expected = kRouteMessageSize;
      allowed_flags = kFlagL;
      break;
    case 2:
      p.type = PacketType::kRrep;
      expected = kRouteMessageSize;
      allowed_flags = kFlagL | kFlagH;
      break;
    case 4:
      p.type = PacketType::kConnect;
      expected = kConnectSize;
      break;
    case 5:
      p.type = PacketType::kEvent;
      expected = kEventHeaderSize;
      allowed_flags = kFlagL;
      break;
    default:
      return error(K::kUnknownType, "type code " + std::to_string(code));
  }

  if ((flag_bits & ~allowed_flags) != 0) return error(K::kReservedBits, "flags byte");
  if (!r.all_zero(2, 2)) return error(K::kReservedBits, "bytes 2..3");
  p.flags.location = (flag_bits & kFlagL) != 0;
  p.flags.hello = (flag_bits & kFlagH) != 0;

  if (p.type == PacketType::kEvent) {
    if (bytes.size() < expected) return error(K::kTruncated, "EVENT header");
    const std::size_t payload_len = r.u16(16);
    expected += (p.flags.location ? kLocationSize : 0) + payload_len;
  }
  if (bytes.size() < expected) {
    return error(K::kTruncated, std::string(to_string(p.type)) + " needs " + std::to_string(expected) + " bytes");
  }
  if (bytes.size() > expected) {
    return error(K::kTrailingBytes, std::to_string(bytes.size() - expected) + " extra bytes");
  }

  std::size_t loc_at = 0;
  switch (p.type) {
    case PacketType::kRreq:
      p.rreq_id = r.u32(4);
      p.dest = r.u32(8);
      p.orig = r.u32(12);
      loc_at = 16;
      break;
    case PacketType::kRrep:
      p.dest = r.u32(4);
      p.orig = r.u32(8);
      if (!r.all_zero(12, 4)) return error(K::kReservedBits, "bytes 12..15");
      loc_at = 16;
      break;
    case PacketType::kConnect:
      p.dest = r.u32(4);
      p.orig = r.u32(8);
      break;
    case PacketType::kEvent:
      p.dest = r.u32(4);
      p.orig = r.u32(8);
      p.seq = r.u32(12);
      loc_at = 18;
      break;
  }

  if (loc_at != 0) {
    if (p.flags.location) {
      p.xloc = r.f32(loc_at);
      p.yloc = r.f32(loc_at + 4);
      if (!std::isfinite(p.xloc) || !std::isfinite(p.yloc)) {
        return error(K::kNonFiniteLocation, "xloc/yloc");
      }
    } else if (p.type != PacketType::kEvent && !r.all_zero(loc_at, kLocationSize)) {
      return error(K::kReservedBits, "location bytes with L clear");
    }
  }
  if (p.type == PacketType::kEvent) {
    const std::size_t payload_at = loc_at + (p.flags.location ? kLocationSize : 0);
    p.payload.assign(bytes.begin() + static_cast<std::ptrdiff_t>(payload_at), bytes.end());
  }

  if (needs_distinct_endpoints(p.type) && p.orig == p.dest) {
    return error(K::kInvalidAddress, "orig == dest");
  }
  return p;
}

}  // namespace lorecos
