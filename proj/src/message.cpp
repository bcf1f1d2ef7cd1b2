#include "latticeloc/message.hpp"

#include <type_traits>

namespace latticeloc {

namespace {

constexpr std::uint8_t header(MsgType t, std::uint8_t flags) {
    return static_cast<std::uint8_t>((static_cast<std::uint8_t>(t) << 4) | (flags & 0x0F));
}

void put16(Payload& p, std::size_t at, std::uint16_t v) {
    p[at] = static_cast<std::uint8_t>(v >> 8);
    p[at + 1] = static_cast<std::uint8_t>(v & 0xFF);
}

std::uint16_t get16(const Payload& p, std::size_t at) {
    return static_cast<std::uint16_t>((p[at] << 8) | p[at + 1]);
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

MsgType type_of(const Message& m) {
    return std::visit(overloaded{
                          [](const IdMsg&) { return MsgType::Sr1aId; },
                          [](const RelayMsg&) { return MsgType::Sr1aRelay; },
                          [](const RepairMsg&) { return MsgType::Sr1bRepair; },
                          [](const CountMsg&) { return MsgType::Sr1cCount; },
                          [](const TokenMsg&) { return MsgType::Sr2aToken; },
                          [](const AxesMsg&) { return MsgType::Sr2aAxes; },
                          [](const BorderCountMsg& b) {
                              return b.near_corner ? MsgType::Sr2bCountNearCorner : MsgType::Sr2bCount;
                          },
                          [](const TotalsMsg&) { return MsgType::Sr2bTotals; },
                          [](const CoordMsg&) { return MsgType::Sr2cCoord; },
                          [](const SyncMsg&) { return MsgType::Sync; },
                      },
                      m);
}

std::optional<LocalId> sender_id(const Message& m) {
    return std::visit(overloaded{
                          [](const IdMsg& v) -> std::optional<LocalId> { return v.id; },
                          [](const RelayMsg& v) -> std::optional<LocalId> { return v.id; },
                          [](const RepairMsg& v) -> std::optional<LocalId> { return v.sender; },
                          [](const CountMsg& v) -> std::optional<LocalId> { return v.id; },
                          [](const AxesMsg& v) -> std::optional<LocalId> { return v.origin; },
                          [](const CoordMsg& v) -> std::optional<LocalId> { return v.id; },
                          [](const auto&) -> std::optional<LocalId> { return std::nullopt; },
                      },
                      m);
}

Payload encode(const Message& m) {
    Payload p{};
    std::visit(overloaded{
                   [&](const IdMsg& v) {
                       p[0] = header(MsgType::Sr1aId, 0);
                       p[1] = v.id.value;
                   },
                   [&](const RelayMsg& v) {
                       p[0] = header(MsgType::Sr1aRelay, v.relay ? 0 : 1);
                       p[1] = v.id.value;
                       p[2] = v.nonce.value;
                       if (v.relay) {
                           p[3] = v.relay->first.value;
                           p[4] = v.relay->second.value;
                       }
                   },
                   [&](const RepairMsg& v) {
                       if (v.neighbours.size() > RepairMsg::kMaxIds) {
                           throw Error(ErrorCode::Malformed, "repair message carries more than 7 IDs");
                       }
                       p[0] = header(MsgType::Sr1bRepair, static_cast<std::uint8_t>(v.neighbours.size()));
                       p[1] = v.sender.value;
                       for (std::size_t i = 0; i < v.neighbours.size(); ++i) {
                           p[2 + i] = v.neighbours[i].value;
                       }
                   },
                   [&](const CountMsg& v) {
                       p[0] = header(MsgType::Sr1cCount, 0);
                       p[1] = v.id.value;
                       p[2] = v.neighbour_count;
                       p[3] = static_cast<std::uint8_t>(v.position);
                   },
                   [&](const TokenMsg& v) {
                       p[0] = header(MsgType::Sr2aToken, v.token.high);
                       for (int i = 0; i < 8; ++i) {
                           p[1 + i] = static_cast<std::uint8_t>(v.token.low >> (8 * (7 - i)));
                       }
                   },
                   [&](const AxesMsg& v) {
                       p[0] = header(MsgType::Sr2aAxes, 0);
                       p[1] = v.origin.value;
                       p[2] = v.x;
                       p[3] = v.y;
                       p[4] = v.lower_id_border.value;
                   },
                   [&](const BorderCountMsg& v) {
                       p[0] = header(v.near_corner ? MsgType::Sr2bCountNearCorner : MsgType::Sr2bCount,
                                     v.from_corner ? 1 : 0);
                       put16(p, 1, v.count);
                       put16(p, 3, v.c1);
                       put16(p, 5, v.c2);
                       put16(p, 7, v.c3);
                   },
                   [&](const TotalsMsg& v) {
                       const std::uint16_t fields[5] = {v.sender_count, v.total, v.c1, v.c2, v.c3};
                       std::uint64_t packed = 0;
                       for (auto f : fields) {
                           if (f > TotalsMsg::kMaxValue) {
                               throw Error(ErrorCode::Malformed, "totals field exceeds 12 bits");
                           }
                           packed = (packed << 12) | f;
                       }
                       packed <<= 4;
                       p[0] = header(MsgType::Sr2bTotals, 0);
                       for (int i = 0; i < 8; ++i) {
                           p[1 + i] = static_cast<std::uint8_t>(packed >> (8 * (7 - i)));
                       }
                   },
                   [&](const CoordMsg& v) {
                       p[0] = header(MsgType::Sr2cCoord, v.frame ? 1 : 0);
                       p[1] = v.id.value;
                       put16(p, 2, v.coord.x);
                       put16(p, 4, v.coord.y);
                       if (v.frame) {
                           const auto [w, h] = *v.frame;
                           if (w > CoordMsg::kMaxSide || h > CoordMsg::kMaxSide) {
                               throw Error(ErrorCode::Malformed, "frame side exceeds 12 bits");
                           }
                           p[6] = static_cast<std::uint8_t>(w >> 4);
                           p[7] = static_cast<std::uint8_t>(((w & 0xF) << 4) | (h >> 8));
                           p[8] = static_cast<std::uint8_t>(h & 0xFF);
                       }
                   },
                   [&](const SyncMsg& v) {
                       p[0] = header(MsgType::Sync, 0);
                       put16(p, 1, v.target.index);
                   },
               },
               m);
    return p;
}

std::optional<Message> decode(const Payload& p) {
    const auto tag = static_cast<std::uint8_t>(p[0] >> 4);
    const auto flags = static_cast<std::uint8_t>(p[0] & 0x0F);
    switch (static_cast<MsgType>(tag)) {
        case MsgType::Sr1aId:
            return IdMsg{LocalId{p[1]}};
        case MsgType::Sr1aRelay: {
            RelayMsg r{LocalId{p[1]}, Nonce{p[2]}, std::nullopt};
            if ((flags & 1) == 0) {
                r.relay = std::pair{LocalId{p[3]}, Nonce{p[4]}};
            }
            return r;
        }
        case MsgType::Sr1bRepair: {
            if (flags > RepairMsg::kMaxIds) {
                return std::nullopt;
            }
            RepairMsg r{LocalId{p[1]}, {}};
            for (std::size_t i = 0; i < flags; ++i) {
                r.neighbours.push_back(LocalId{p[2 + i]});
            }
            return r;
        }
        case MsgType::Sr1cCount: {
            if (p[3] > static_cast<std::uint8_t>(PositionGroup::Fault)) {
                return std::nullopt;
            }
            return CountMsg{LocalId{p[1]}, p[2], static_cast<PositionGroup>(p[3])};
        }
        case MsgType::Sr2aToken: {
            OriginToken t;
            t.high = flags;
            for (int i = 0; i < 8; ++i) {
                t.low = (t.low << 8) | p[1 + i];
            }
            return TokenMsg{t};
        }
        case MsgType::Sr2aAxes:
            return AxesMsg{LocalId{p[1]}, p[2], p[3], LocalId{p[4]}};
        case MsgType::Sr2bCount:
        case MsgType::Sr2bCountNearCorner:
            return BorderCountMsg{static_cast<MsgType>(tag) == MsgType::Sr2bCountNearCorner, (flags & 1) != 0,
                                  get16(p, 1), get16(p, 3), get16(p, 5), get16(p, 7)};
        case MsgType::Sr2bTotals: {
            std::uint64_t packed = 0;
            for (int i = 0; i < 8; ++i) {
                packed = (packed << 8) | p[1 + i];
            }
            if ((packed & 0x0F) != 0) {
                return std::nullopt;
            }
            packed >>= 4;
            TotalsMsg t;
            t.c3 = static_cast<std::uint16_t>(packed & 0xFFF);
            t.c2 = static_cast<std::uint16_t>((packed >> 12) & 0xFFF);
            t.c1 = static_cast<std::uint16_t>((packed >> 24) & 0xFFF);
            t.total = static_cast<std::uint16_t>((packed >> 36) & 0xFFF);
            t.sender_count = static_cast<std::uint16_t>((packed >> 48) & 0xFFF);
            return t;
        }
        case MsgType::Sr2cCoord: {
            if (flags > 1) {
                return std::nullopt;
            }
            CoordMsg c{LocalId{p[1]}, Coord{get16(p, 2), get16(p, 4)}, std::nullopt};
            if (flags == 1) {
                c.frame = std::pair{static_cast<std::uint16_t>((p[6] << 4) | (p[7] >> 4)),
                                    static_cast<std::uint16_t>(((p[7] & 0xF) << 8) | p[8])};
            }
            return c;
        }
        case MsgType::Sync:
            return SyncMsg{Phase(get16(p, 1))};
    }
    return std::nullopt;
}

}  // namespace latticeloc
