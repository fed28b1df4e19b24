#pragma once

// Binary encoding of the four AODVjr/LORECOS message types.
//
// All multi-byte fields are big-endian; coordinates are IEEE-754 single
// precision. Layouts:
//
//   RREQ    (24 B)  type=1 | flags | rsvd(2) | rreq_id | dest | orig | xloc | yloc
//   RREP    (24 B)  type=2 | flags | rsvd(2) | dest | orig | rsvd(4) | xloc | yloc
//   CONNECT (12 B)  type=4 | flags=0 | rsvd(2) | dest | orig
//   EVENT   (18+ B) type=5 | flags | rsvd(2) | dest | orig | seq | len(u16)
//                   [xloc | yloc if L] | payload(len)
//
// Flag bit 0 is L (location valid), bit 1 is H (HELLO request, RREP only).
// Every other flag bit and every reserved byte must be zero. When L is clear
// the location bytes of RREQ/RREP must be zero as well.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lorecos/types.hpp"

namespace lorecos {

enum class PacketType : std::uint8_t {
  kRreq = 1,
  kRrep = 2,
  // 3 is RERR in full AODV; AODVjr has none.
  kConnect = 4,
  kEvent = 5,
};

std::string_view to_string(PacketType type);

struct FlagSet {
  bool location = false;  // L
  bool hello = false;     // H: HELLO request when set, reply when clear

  friend bool operator==(const FlagSet&, const FlagSet&) = default;

  std::uint8_t bits() const {
    return static_cast<std::uint8_t>((location ? 0x01 : 0x00) | (hello ? 0x02 : 0x00));
  }
};

struct WirePacket {
  PacketType type = PacketType::kRreq;
  FlagSet flags;
  std::uint32_t rreq_id = 0;  // RREQ only
  NodeId dest = kNoNode;
  NodeId orig = kNoNode;
  float xloc = 0.0f;  // meaningful only when flags.location
  float yloc = 0.0f;
  std::uint32_t seq = 0;              // EVENT only
  std::vector<std::uint8_t> payload;  // EVENT only

  bool has_location() const { return flags.location; }
  Position location() const { return {static_cast<double>(xloc), static_cast<double>(yloc)}; }
  void set_location(Position p);
  void clear_location();

  /// Equality over the fields carried on the wire for this packet type.
  friend bool operator==(const WirePacket& a, const WirePacket& b);
};

WirePacket make_rreq(NodeId orig, NodeId dest, std::uint32_t rreq_id);
WirePacket make_rrep(NodeId orig, NodeId dest);
WirePacket make_hello_request(NodeId requester);
WirePacket make_hello_reply(NodeId replier, NodeId requester, Position own);
WirePacket make_connect(NodeId orig, NodeId dest);
WirePacket make_event(NodeId orig, NodeId dest, std::uint32_t seq, std::vector<std::uint8_t> payload);

inline constexpr std::size_t kRouteMessageSize = 24;
inline constexpr std::size_t kConnectSize = 12;
inline constexpr std::size_t kEventHeaderSize = 18;
inline constexpr std::size_t kLocationSize = 8;

/// Thrown by encode() for packets that violate their type invariants.
class EncodeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct DecodeError {
  enum class Kind {
    kTruncated,
    kTrailingBytes,
    kUnknownType,
    kReservedBits,
    kNonFiniteLocation,
    kInvalidAddress,
  };
  Kind kind;
  std::string detail;
};

std::string_view to_string(DecodeError::Kind kind);

using DecodeResult = std::variant<WirePacket, DecodeError>;

std::size_t encoded_size(const WirePacket& packet);

std::vector<std::uint8_t> encode(const WirePacket& packet);

DecodeResult decode(std::span<const std::uint8_t> bytes);

}  // namespace lorecos
