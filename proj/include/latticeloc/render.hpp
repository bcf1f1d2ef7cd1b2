#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "latticeloc/lattice.hpp"

namespace latticeloc {

/// One character per cell: '.' OFF, ' ' departed or empty, R/G/B/C/M/Y/W lit colours.
/// Row 0 is the top of the lattice (largest y).
struct Frame {
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::vector<char> cells;

    char at(std::uint32_t col, std::uint32_t row_from_top) const { return cells[row_from_top * width + col]; }
};

char role_symbol(const Role& role, bool silent);

/// Places every agent at its ground-truth cell. Hexagonal rows are drawn two characters per
/// agent with odd rows shifted by one.
Frame render_frame(const GroundTruth& truth, std::span<const Role> roles, std::span<const std::uint8_t> silent = {});

std::string to_ascii(const Frame& frame);

/// Binary P6 pixmap, `scale` pixels per cell.
std::string to_ppm(const Frame& frame, unsigned scale = 8);

}  // namespace latticeloc
