#include "latticeloc/types.hpp"

#include <array>
#include <utility>

namespace latticeloc {

std::string_view to_string(PositionGroup g) {
    switch (g) {
        case PositionGroup::Unknown:
            return "UNKNOWN";
        case PositionGroup::Corner:
            return "CORNER";
        case PositionGroup::Border:
            return "BORDER";
        case PositionGroup::Middle:
            return "MIDDLE";
        case PositionGroup::Fault:
            return "FAULT";
    }
    return "?";
}

std::string_view to_string(Stage s) {
    switch (s) {
        case Stage::Sr1aP1:
            return "SR1A_P1";
        case Stage::Sr1aP2:
            return "SR1A_P2";
        case Stage::Sr1bP2:
            return "SR1B_P2";
        case Stage::Sr1bRepair:
            return "SR1B_REPAIR";
        case Stage::Sr1c:
            return "SR1C";
        case Stage::Sr2aElect:
            return "SR2A_ELECT";
        case Stage::Sr2aAxes:
            return "SR2A_AXES";
        case Stage::Sr2bCount:
            return "SR2B_COUNT";
        case Stage::Sr2bDistribute:
            return "SR2B_DISTRIBUTE";
        case Stage::Sr2c:
            return "SR2C";
        case Stage::R3:
            return "R3_STEP";
    }
    return "?";
}

namespace {
constexpr std::array<std::pair<Color, std::string_view>, 7> kColorNames{{
    {Color::Red, "red"},
    {Color::Green, "green"},
    {Color::Blue, "blue"},
    {Color::Cyan, "cyan"},
    {Color::Magenta, "magenta"},
    {Color::Yellow, "yellow"},
    {Color::White, "white"},
}};
}  // namespace

std::string_view to_string(Color c) {
    for (const auto& [color, name] : kColorNames) {
        if (color == c) {
            return name;
        }
    }
    return "?";
}

std::optional<Color> parse_color(std::string_view s) {
    for (const auto& [color, name] : kColorNames) {
        if (name == s) {
            return color;
        }
    }
    return std::nullopt;
}

std::string_view to_string(ErrorCode c) {
    switch (c) {
        case ErrorCode::FullBlacklist:
            return "FULL_BLACKLIST";
        case ErrorCode::EpsOutOfRange:
            return "EPS_OUT_OF_RANGE";
        case ErrorCode::OriginDegenerate:
            return "ORIGIN_DEGENERATE";
        case ErrorCode::CountInconsistent:
            return "COUNT_INCONSISTENT";
        case ErrorCode::PhaseSkew:
            return "PHASE_SKEW";
        case ErrorCode::InvalidSpec:
            return "INVALID_SPEC";
        case ErrorCode::ParseError:
            return "PARSE_ERROR";
        case ErrorCode::Malformed:
            return "MALFORMED";
    }
    return "?";
}

}  // namespace latticeloc
