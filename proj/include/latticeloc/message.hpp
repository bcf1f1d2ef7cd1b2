#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "latticeloc/types.hpp"

namespace latticeloc {

/// Kilobot-style fixed 9-byte broadcast payload.
inline constexpr std::size_t kPayloadSize = 9;
using Payload = std::array<std::uint8_t, kPayloadSize>;

/// High nibble of byte 0.
enum class MsgType : std::uint8_t {
    Sr1aId = 0,
    Sr1aRelay = 1,
    Sr1bRepair = 2,
    Sr1cCount = 3,
    Sr2aToken = 4,
    Sr2aAxes = 5,
    Sr2bCount = 6,
    Sr2bCountNearCorner = 7,
    Sr2bTotals = 8,
    Sr2cCoord = 9,
    Sync = 10,
};

struct IdMsg {
    LocalId id;
    bool operator==(const IdMsg&) const = default;
};

/// Duplicated-ID detection: own (id, nonce) plus one relayed neighbour pair.
struct RelayMsg {
    LocalId id;
    Nonce nonce;
    std::optional<std::pair<LocalId, Nonce>> relay;
    bool operator==(const RelayMsg&) const = default;
};

/// Sender ID plus a window of at most seven of its neighbour IDs.
struct RepairMsg {
    static constexpr std::size_t kMaxIds = 7;
    LocalId sender;
    std::vector<LocalId> neighbours;
    bool operator==(const RepairMsg&) const = default;
};

struct CountMsg {
    LocalId id;
    std::uint8_t neighbour_count = 0;
    PositionGroup position = PositionGroup::Unknown;
    bool operator==(const CountMsg&) const = default;
};

struct TokenMsg {
    OriginToken token;
    bool operator==(const TokenMsg&) const = default;
};

struct AxesMsg {
    LocalId origin;
    std::uint8_t x = 1;
    std::uint8_t y = 1;
    LocalId lower_id_border;
    bool operator==(const AxesMsg&) const = default;
};

/// Perimeter counter. Corner slots c1..c3 are zero until a corner fills them.
struct BorderCountMsg {
    bool near_corner = false;  // sent with the header only corners read
    bool from_corner = false;  // flag bit 0
    std::uint16_t count = 0;
    std::uint16_t c1 = 0;
    std::uint16_t c2 = 0;
    std::uint16_t c3 = 0;
    bool operator==(const BorderCountMsg&) const = default;
};

/// Totals relayed around the border. Fields are 12-bit on the wire.
struct TotalsMsg {
    static constexpr std::uint16_t kMaxValue = 0x0FFF;
    std::uint16_t sender_count = 0;
    std::uint16_t total = 0;
    std::uint16_t c1 = 0;
    std::uint16_t c2 = 0;
    std::uint16_t c3 = 0;
    bool operator==(const TotalsMsg&) const = default;
};

struct CoordMsg {
    static constexpr std::uint16_t kMaxSide = 0xFFF;
    LocalId id;
    Coord coord;
    /// Frame width and height when the sender knows them; 12 bits each on the wire.
    std::optional<std::pair<std::uint16_t, std::uint16_t>> frame;
    bool operator==(const CoordMsg&) const = default;
};

struct SyncMsg {
    Phase target;
    bool operator==(const SyncMsg&) const = default;
};

using Message = std::variant<IdMsg, RelayMsg, RepairMsg, CountMsg, TokenMsg, AxesMsg, BorderCountMsg, TotalsMsg,
                             CoordMsg, SyncMsg>;

MsgType type_of(const Message& m);

/// Sender ID carried by the message, if its layout has one.
std::optional<LocalId> sender_id(const Message& m);

/// Bit-exact encoding. Throws Error(Malformed) for values that do not fit the layout.
Payload encode(const Message& m);

/// Returns nullopt for unknown type tags or inconsistent field values.
std::optional<Message> decode(const Payload& p);

}  // namespace latticeloc
