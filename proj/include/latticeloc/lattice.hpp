#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "latticeloc/types.hpp"

namespace latticeloc {

enum class Topology { Rectangular, Hexagonal };

std::string_view to_string(Topology t);

/// Ground-truth world description.
struct LatticeSpec {
    Topology topology = Topology::Rectangular;
    std::uint32_t cols = 5;
    std::uint32_t rows = 5;
    std::vector<std::uint32_t> row_lengths;  // hexagonal only, bottom row first
    double dx_mm = 35.0;
    double dy_mm = 35.0;  // rectangular only; hexagonal rows sit dx*sqrt(3)/2 apart
    double jitter_eps = 0.0;

    std::size_t agent_count() const;
    double min_spacing() const;

    /// Throws Error(InvalidSpec).
    void validate() const;
};

struct Point {
    double x = 0.0;
    double y = 0.0;
};

double distance(Point a, Point b);

struct GroundTruth {
    LatticeSpec spec;
    std::vector<Point> positions;        // after jitter
    std::vector<Coord> true_coord;       // rectangular only
    std::vector<std::pair<std::uint32_t, std::uint32_t>> cell;  // (col, row), 0-based, for rendering
    std::vector<std::vector<std::size_t>> adjacency;             // sorted, symmetric

    std::size_t size() const { return positions.size(); }
};

/// Lays agents out row-major with optional jitter. Adjacency comes from the ideal grid.
GroundTruth generate(const LatticeSpec& spec, Rng& rng);

/// The eight symmetries of a rectangle, mapping true coordinates of an m x n grid onto an
/// assigned frame (which is n x m for the axis-swapping ones).
enum class Symmetry : std::uint8_t {
    Identity,
    FlipX,
    FlipY,
    Rot180,
    Transpose,
    Rot90,
    Rot270,
    AntiTranspose,
};

inline constexpr std::array<Symmetry, 8> kAllSymmetries{
    Symmetry::Identity, Symmetry::FlipX, Symmetry::FlipY,  Symmetry::Rot180,
    Symmetry::Transpose, Symmetry::Rot90, Symmetry::Rot270, Symmetry::AntiTranspose,
};

std::string_view to_string(Symmetry s);
bool swaps_axes(Symmetry s);
Coord apply(Symmetry s, Coord c, std::uint32_t width, std::uint32_t height);
/// Inverse of apply(s, ., width, height).
Coord unapply(Symmetry s, Coord c, std::uint32_t width, std::uint32_t height);

struct VerifyResult {
    bool pass = false;
    std::optional<Symmetry> symmetry;
    std::optional<std::size_t> first_mismatch;  // agent index, on FAIL
    std::string detail;
};

VerifyResult verify_coords(std::span<const Coord> assigned, const GroundTruth& truth);

struct GroupCounts {
    std::size_t corners = 0;
    std::size_t borders = 0;
    std::size_t middles = 0;
    bool operator==(const GroupCounts&) const = default;
};

/// Rectangular only: (4, 2(m+n)-8, (m-2)(n-2)).
GroupCounts expected_group_counts(const LatticeSpec& spec);

/// Hop diameter of the graph linking agents within `range_mm` of each other.
std::size_t comm_diameter(const GroundTruth& truth, double range_mm);

}  // namespace latticeloc
