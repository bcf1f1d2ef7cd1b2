#include "latticeloc/render.hpp"

#include <array>

namespace latticeloc {

char role_symbol(const Role& role, bool silent) {
    if (silent || role.kind == Role::Kind::Departed) {
        return ' ';
    }
    if (role.kind == Role::Kind::Off) {
        return '.';
    }
    switch (role.color) {
        case Color::Red:
            return 'R';
        case Color::Green:
            return 'G';
        case Color::Blue:
            return 'B';
        case Color::Cyan:
            return 'C';
        case Color::Magenta:
            return 'M';
        case Color::Yellow:
            return 'Y';
        case Color::White:
            return 'W';
    }
    return '?';
}

Frame render_frame(const GroundTruth& truth, std::span<const Role> roles, std::span<const std::uint8_t> silent) {
    Frame f;
    const bool hex = truth.spec.topology == Topology::Hexagonal;
    std::uint32_t max_col = 0;
    std::uint32_t max_row = 0;
    for (const auto& [c, r] : truth.cell) {
        max_col = std::max(max_col, c);
        max_row = std::max(max_row, r);
    }
    f.width = hex ? 2 * (max_col + 1) + 1 : max_col + 1;
    f.height = max_row + 1;
    f.cells.assign(static_cast<std::size_t>(f.width) * f.height, ' ');
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const auto [c, r] = truth.cell[i];
        const std::uint32_t x = hex ? 2 * c + (r % 2) : c;
        const std::uint32_t y = max_row - r;
        const bool quiet = i < silent.size() && silent[i];
        f.cells[static_cast<std::size_t>(y) * f.width + x] = role_symbol(roles[i], quiet);
    }
    return f;
}

std::string to_ascii(const Frame& frame) {
    std::string out;
    out.reserve(static_cast<std::size_t>(frame.width + 1) * frame.height);
    for (std::uint32_t y = 0; y < frame.height; ++y) {
        out.append(&frame.cells[static_cast<std::size_t>(y) * frame.width], frame.width);
        out.push_back('\n');
    }
    return out;
}

namespace {

std::array<unsigned char, 3> rgb(char symbol) {
    switch (symbol) {
        case '.':
            return {40, 40, 40};
        case 'R':
            return {230, 40, 40};
        case 'G':
            return {40, 200, 60};
        case 'B':
            return {50, 80, 230};
        case 'C':
            return {40, 210, 210};
        case 'M':
            return {210, 50, 210};
        case 'Y':
            return {230, 220, 40};
        case 'W':
            return {245, 245, 245};
        default:
            return {0, 0, 0};
    }
}

}  // namespace

std::string to_ppm(const Frame& frame, unsigned scale) {
    scale = std::max(1u, scale);
    const std::uint32_t w = frame.width * scale;
    const std::uint32_t h = frame.height * scale;
    std::string out = "P6\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
    const std::size_t header = out.size();
    out.resize(header + static_cast<std::size_t>(w) * h * 3);
    auto* px = reinterpret_cast<unsigned char*>(out.data() + header);
    for (std::uint32_t y = 0; y < h; ++y) {
        for (std::uint32_t x = 0; x < w; ++x) {
            const auto c = rgb(frame.at(x / scale, y / scale));
            // one-pixel gap between cells
            const bool gap = scale > 2 && (x % scale == scale - 1 || y % scale == scale - 1);
            for (int k = 0; k < 3; ++k) {
                *px++ = gap ? 0 : c[k];
            }
        }
    }
    return out;
}

}  // namespace latticeloc
