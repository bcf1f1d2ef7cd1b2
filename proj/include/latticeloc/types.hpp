#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace latticeloc {

/// All randomness in a run flows from one generator of this type.
using Rng = std::mt19937_64;

/// Locally-unique 8-bit identifier.
struct LocalId {
    std::uint8_t value = 0;
    auto operator<=>(const LocalId&) const = default;
};

/// Random byte regenerated at the start of duplicated-ID detection.
struct Nonce {
    std::uint8_t value = 0;
    auto operator<=>(const Nonce&) const = default;
};

/// 68-bit origin election token. Compared as an unsigned magnitude.
struct OriginToken {
    std::uint8_t high = 0;  // bits 67..64, only the low nibble is used
    std::uint64_t low = 0;

    auto operator<=>(const OriginToken&) const = default;

    static OriginToken draw(Rng& rng) {
        OriginToken t;
        t.high = static_cast<std::uint8_t>(rng() & 0x0F);
        t.low = rng();
        return t;
    }
};

/// 1-based lattice coordinate. Zero on an axis means that axis is unassigned.
struct Coord {
    std::uint16_t x = 0;
    std::uint16_t y = 0;

    constexpr bool assigned() const { return x != 0 && y != 0; }
    constexpr bool partial() const { return x != 0 || y != 0; }
    auto operator<=>(const Coord&) const = default;
};

struct Dimensions {
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::uint32_t population = 0;
    auto operator<=>(const Dimensions&) const = default;
};

enum class PositionGroup : std::uint8_t { Unknown = 0, Corner = 1, Border = 2, Middle = 3, Fault = 4 };

std::string_view to_string(PositionGroup g);

/// Ordered protocol stages. R3 is followed by an unbounded number of plan steps.
enum class Stage : std::uint16_t {
    Sr1aP1 = 0,
    Sr1aP2,
    Sr1bP2,
    Sr1bRepair,
    Sr1c,
    Sr2aElect,
    Sr2aAxes,
    Sr2bCount,
    Sr2bDistribute,
    Sr2c,
    R3,
};

std::string_view to_string(Stage s);

/// Monotone phase index. Indices >= Stage::R3 are R3 plan steps.
struct Phase {
    std::uint16_t index = 0;

    constexpr Phase() = default;
    constexpr explicit Phase(std::uint16_t i) : index(i) {}
    constexpr Phase(Stage s) : index(static_cast<std::uint16_t>(s)) {}  // NOLINT

    constexpr Stage stage() const {
        return index >= static_cast<std::uint16_t>(Stage::R3) ? Stage::R3 : static_cast<Stage>(index);
    }
    constexpr std::uint16_t r3_step() const {
        return index >= static_cast<std::uint16_t>(Stage::R3) ? index - static_cast<std::uint16_t>(Stage::R3) : 0;
    }
    static constexpr Phase r3(std::uint16_t step) {
        return Phase(static_cast<std::uint16_t>(static_cast<std::uint16_t>(Stage::R3) + step));
    }
    constexpr Phase next() const { return Phase(static_cast<std::uint16_t>(index + 1)); }

    auto operator<=>(const Phase&) const = default;
};

enum class Color : std::uint8_t { Red, Green, Blue, Cyan, Magenta, Yellow, White };

std::string_view to_string(Color c);
std::optional<Color> parse_color(std::string_view s);

/// Role of an agent during R3.
struct Role {
    enum class Kind : std::uint8_t { Off, Lit, Departed };
    Kind kind = Kind::Off;
    Color color = Color::White;

    static constexpr Role off() { return {}; }
    static constexpr Role lit(Color c) { return {Kind::Lit, c}; }
    static constexpr Role departed() { return {Kind::Departed, Color::White}; }

    constexpr bool is_lit() const { return kind == Kind::Lit; }
    bool operator==(const Role& o) const {
        return kind == o.kind && (kind != Kind::Lit || color == o.color);
    }
};

enum class ErrorCode {
    FullBlacklist,
    EpsOutOfRange,
    OriginDegenerate,
    CountInconsistent,
    PhaseSkew,
    InvalidSpec,
    ParseError,
    Malformed,
};

std::string_view to_string(ErrorCode c);

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

}  // namespace latticeloc
