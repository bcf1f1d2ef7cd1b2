#include "latticeloc/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>

#include "latticeloc/geometry.hpp"

namespace latticeloc {

std::string_view to_string(Topology t) { return t == Topology::Rectangular ? "rectangular" : "hexagonal"; }

std::size_t LatticeSpec::agent_count() const {
    if (topology == Topology::Rectangular) {
        return static_cast<std::size_t>(cols) * rows;
    }
    std::size_t n = 0;
    for (auto len : row_lengths) {
        n += len;
    }
    return n;
}

double LatticeSpec::min_spacing() const {
    return topology == Topology::Rectangular ? std::min(dx_mm, dy_mm) : dx_mm;
}

void LatticeSpec::validate() const {
    if (!(dx_mm > 0.0) || (topology == Topology::Rectangular && !(dy_mm > 0.0))) {
        throw Error(ErrorCode::InvalidSpec, "lattice spacing must be positive");
    }
    if (!(jitter_eps >= 0.0)) {
        throw Error(ErrorCode::InvalidSpec, "jitter_eps must be non-negative");
    }
    if (topology == Topology::Rectangular) {
        if (cols < 3 || rows < 3) {
            throw Error(ErrorCode::InvalidSpec, "rectangular lattice needs at least 3 rows and 3 columns");
        }
        bool feasible = false;
        try {
            feasible = spacing_feasible(dx_mm, dy_mm, jitter_eps);
        } catch (const Error& e) {
            throw Error(ErrorCode::InvalidSpec, std::string("spacing check failed: ") + e.what());
        }
        if (!feasible) {
            throw Error(ErrorCode::InvalidSpec, "spacing ratio too large for a Moore-neighbourhood radius");
        }
    } else {
        if (row_lengths.size() < 3) {
            throw Error(ErrorCode::InvalidSpec, "hexagonal lattice needs at least 3 rows");
        }
        for (auto len : row_lengths) {
            if (len < 2) {
                throw Error(ErrorCode::InvalidSpec, "hexagonal rows need at least 2 agents");
            }
        }
    }
}

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

GroundTruth generate(const LatticeSpec& spec, Rng& rng) {
    spec.validate();
    GroundTruth g;
    g.spec = spec;
    std::vector<Point> ideal;

    if (spec.topology == Topology::Rectangular) {
        for (std::uint32_t r = 0; r < spec.rows; ++r) {
            for (std::uint32_t c = 0; c < spec.cols; ++c) {
                ideal.push_back({c * spec.dx_mm, r * spec.dy_mm});
                g.true_coord.push_back(Coord{static_cast<std::uint16_t>(c + 1), static_cast<std::uint16_t>(r + 1)});
                g.cell.emplace_back(c, r);
            }
        }
        const std::size_t n = ideal.size();
        g.adjacency.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const auto [ci, ri] = g.cell[i];
            for (std::size_t j = 0; j < n; ++j) {
                const auto [cj, rj] = g.cell[j];
                const auto dc = std::abs(static_cast<int>(ci) - static_cast<int>(cj));
                const auto dr = std::abs(static_cast<int>(ri) - static_cast<int>(rj));
                if (i != j && dc <= 1 && dr <= 1) {
                    g.adjacency[i].push_back(j);
                }
            }
        }
    } else {
        const double row_step = spec.dx_mm * std::numbers::sqrt3 / 2.0;
        for (std::uint32_t r = 0; r < spec.row_lengths.size(); ++r) {
            const double offset = (r % 2 == 1) ? spec.dx_mm / 2.0 : 0.0;
            for (std::uint32_t c = 0; c < spec.row_lengths[r]; ++c) {
                ideal.push_back({offset + c * spec.dx_mm, r * row_step});
                g.cell.emplace_back(c, r);
            }
        }
        const std::size_t n = ideal.size();
        g.adjacency.resize(n);
        const double tol = spec.dx_mm * (1.0 + 1e-9);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i != j && distance(ideal[i], ideal[j]) <= tol) {
                    g.adjacency[i].push_back(j);
                }
            }
        }
    }

    g.positions = ideal;
    if (spec.jitter_eps > 0.0) {
        const double radius = spec.jitter_eps * spec.min_spacing();
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (auto& p : g.positions) {
            const double rr = radius * std::sqrt(unit(rng));
            const double theta = 2.0 * std::numbers::pi * unit(rng);
            p.x += rr * std::cos(theta);
            p.y += rr * std::sin(theta);
        }
    }
    return g;
}

std::string_view to_string(Symmetry s) {
    switch (s) {
        case Symmetry::Identity:
            return "identity";
        case Symmetry::FlipX:
            return "flip_x";
        case Symmetry::FlipY:
            return "flip_y";
        case Symmetry::Rot180:
            return "rot180";
        case Symmetry::Transpose:
            return "transpose";
        case Symmetry::Rot90:
            return "rot90";
        case Symmetry::Rot270:
            return "rot270";
        case Symmetry::AntiTranspose:
            return "anti_transpose";
    }
    return "?";
}

bool swaps_axes(Symmetry s) {
    return s == Symmetry::Transpose || s == Symmetry::Rot90 || s == Symmetry::Rot270 ||
           s == Symmetry::AntiTranspose;
}

Coord apply(Symmetry s, Coord c, std::uint32_t width, std::uint32_t height) {
    const auto m = static_cast<int>(width);
    const auto n = static_cast<int>(height);
    const int x = c.x;
    const int y = c.y;
    auto mk = [](int a, int b) { return Coord{static_cast<std::uint16_t>(a), static_cast<std::uint16_t>(b)}; };
    switch (s) {
        case Symmetry::Identity:
            return mk(x, y);
        case Symmetry::FlipX:
            return mk(m + 1 - x, y);
        case Symmetry::FlipY:
            return mk(x, n + 1 - y);
        case Symmetry::Rot180:
            return mk(m + 1 - x, n + 1 - y);
        case Symmetry::Transpose:
            return mk(y, x);
        case Symmetry::Rot90:
            return mk(n + 1 - y, x);
        case Symmetry::Rot270:
            return mk(y, m + 1 - x);
        case Symmetry::AntiTranspose:
            return mk(n + 1 - y, m + 1 - x);
    }
    return c;
}

Coord unapply(Symmetry s, Coord c, std::uint32_t width, std::uint32_t height) {
    const auto m = static_cast<int>(width);
    const auto n = static_cast<int>(height);
    const int a = c.x;
    const int b = c.y;
    auto mk = [](int x, int y) { return Coord{static_cast<std::uint16_t>(x), static_cast<std::uint16_t>(y)}; };
    switch (s) {
        case Symmetry::Identity:
            return mk(a, b);
        case Symmetry::FlipX:
            return mk(m + 1 - a, b);
        case Symmetry::FlipY:
            return mk(a, n + 1 - b);
        case Symmetry::Rot180:
            return mk(m + 1 - a, n + 1 - b);
        case Symmetry::Transpose:
            return mk(b, a);
        case Symmetry::Rot90:
            return mk(b, n + 1 - a);
        case Symmetry::Rot270:
            return mk(m + 1 - b, a);
        case Symmetry::AntiTranspose:
            return mk(m + 1 - b, n + 1 - a);
    }
    return c;
}

VerifyResult verify_coords(std::span<const Coord> assigned, const GroundTruth& truth) {
    VerifyResult result;
    if (truth.spec.topology != Topology::Rectangular) {
        result.detail = "coordinate verification needs a rectangular lattice";
        return result;
    }
    if (assigned.size() != truth.size()) {
        result.detail = "assignment size does not match the swarm";
        return result;
    }
    const auto m = truth.spec.cols;
    const auto n = truth.spec.rows;
    std::size_t best_matches = 0;
    std::optional<std::size_t> best_first_bad;
    Symmetry best_sym = Symmetry::Identity;
    for (auto s : kAllSymmetries) {
        std::size_t matches = 0;
        std::optional<std::size_t> first_bad;
        for (std::size_t i = 0; i < assigned.size(); ++i) {
            if (assigned[i] == apply(s, truth.true_coord[i], m, n)) {
                ++matches;
            } else if (!first_bad) {
                first_bad = i;
            }
        }
        if (!first_bad) {
            result.pass = true;
            result.symmetry = s;
            result.detail = std::string("PASS(") + std::string(to_string(s)) + ")";
            return result;
        }
        if (matches > best_matches || s == Symmetry::Identity) {
            best_matches = matches;
            best_first_bad = first_bad;
            best_sym = s;
        }
    }
    result.first_mismatch = best_first_bad;
    const auto i = *best_first_bad;
    result.detail = "FAIL: agent " + std::to_string(i) + " at true (" + std::to_string(truth.true_coord[i].x) + "," +
                    std::to_string(truth.true_coord[i].y) + ") assigned (" + std::to_string(assigned[i].x) + "," +
                    std::to_string(assigned[i].y) + "), closest symmetry " + std::string(to_string(best_sym));
    return result;
}

GroupCounts expected_group_counts(const LatticeSpec& spec) {
    if (spec.topology != Topology::Rectangular) {
        throw Error(ErrorCode::InvalidSpec, "group counts are defined for rectangular lattices");
    }
    const std::size_t m = spec.cols;
    const std::size_t n = spec.rows;
    return {4, 2 * (m + n) - 8, (m - 2) * (n - 2)};
}

std::size_t comm_diameter(const GroundTruth& truth, double range_mm) {
    const std::size_t n = truth.size();
    std::vector<std::vector<std::size_t>> links(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (distance(truth.positions[i], truth.positions[j]) <= range_mm) {
                links[i].push_back(j);
                links[j].push_back(i);
            }
        }
    }
    std::size_t diameter = 0;
    std::vector<std::size_t> dist(n);
    for (std::size_t s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), SIZE_MAX);
        dist[s] = 0;
        std::queue<std::size_t> q;
        q.push(s);
        while (!q.empty()) {
            const auto u = q.front();
            q.pop();
            for (auto v : links[u]) {
                if (dist[v] == SIZE_MAX) {
                    dist[v] = dist[u] + 1;
                    diameter = std::max(diameter, dist[v]);
                    q.push(v);
                }
            }
        }
    }
    return diameter;
}

}  // namespace latticeloc
