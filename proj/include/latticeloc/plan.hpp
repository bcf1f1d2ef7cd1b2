#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "latticeloc/types.hpp"

namespace latticeloc {

/// One coordinate predicate with the role it assigns.
struct PlanRule {
    enum class Kind { Rect, Glyph };

    Kind kind = Kind::Rect;
    Role role;
    // Rect: inclusive corners.
    Coord lo;
    Coord hi;
    // Glyph: rows as written ('#' = member), first row at the anchor's y, going down.
    std::vector<std::string> rows;
    Coord anchor;

    bool matches(Coord c) const;
};

struct PlanStep {
    std::vector<PlanRule> rules;
};

/// Time-stepped mapping from lattice coordinates to roles.
struct ActionPlan {
    double step_seconds = 8.0;
    bool cyclic = true;
    std::vector<PlanStep> steps;

    /// Index into `steps` for a protocol step counter; nullopt past the end of a non-cyclic plan.
    std::optional<std::size_t> step_index(std::uint32_t step) const;

    /// First-match lookup. Unmatched coordinates, and coordinates outside `dims` when known, are OFF.
    Role role_at(Coord c, std::uint32_t step, std::optional<Dimensions> dims = std::nullopt) const;

    /// Coordinates inside a width x height grid that are LIT at `step`.
    std::set<Coord> lit_cells(std::uint32_t step, std::uint32_t width, std::uint32_t height) const;
};

/// Parses the line-oriented plan grammar:
///
///     # comment
///     step_seconds = 8
///     cyclic = true
///     step
///     rect X1 Y1 X2 Y2 -> COLOR
///     glyph -> COLOR at X,Y
///     .#.
///     ###
///     end
///
/// COLOR is one of red, green, blue, cyan, magenta, yellow, white, off or departed.
/// Throws Error(ParseError) naming the offending line.
ActionPlan parse_plan(std::string_view text);

ActionPlan load_plan(const std::string& path);

}  // namespace latticeloc
