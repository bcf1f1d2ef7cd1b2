#include "latticeloc/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "latticeloc/geometry.hpp"
#include "latticeloc/protocol.hpp"

namespace latticeloc {

std::vector<Coord> perimeter_walk(std::uint32_t m, std::uint32_t n) {
    std::vector<Coord> walk;
    int x = 1;
    int y = 1;
    const int dx[4] = {1, 0, -1, 0};
    const int dy[4] = {0, 1, 0, -1};
    int dir = 0;
    const std::size_t len = 2 * (m + n) - 4;
    while (walk.size() < len) {
        walk.push_back(Coord{static_cast<std::uint16_t>(x), static_cast<std::uint16_t>(y)});
        int nx = x + dx[dir];
        int ny = y + dy[dir];
        if (nx < 1 || nx > static_cast<int>(m) || ny < 1 || ny > static_cast<int>(n)) {
            dir = (dir + 1) % 4;
            nx = x + dx[dir];
            ny = y + dy[dir];
        }
        x = nx;
        y = ny;
    }
    return walk;
}

SuiteReport perimeter_suite(std::uint32_t max_side) {
    SuiteReport rep;
    rep.name = "perimeter-walk";
    for (std::uint32_t m = 3; m <= max_side && rep.pass; ++m) {
        for (std::uint32_t n = 3; n <= max_side && rep.pass; ++n) {
            ++rep.cases;
            const auto walk = perimeter_walk(m, n);
            // corner positions along the walk give the counts the corners hold
            std::vector<std::uint32_t> corner_counts;
            for (std::size_t k = 1; k < walk.size(); ++k) {
                const auto c = walk[k];
                if ((c.x == 1 || c.x == m) && (c.y == 1 || c.y == n)) {
                    corner_counts.push_back(static_cast<std::uint32_t>(k + 1));
                }
            }
            const auto c1 = corner_counts.at(0);
            const auto c2 = corner_counts.at(1);
            const auto c3 = corner_counts.at(2);
            std::set<Coord> seen;
            for (std::size_t k = 0; k < walk.size(); ++k) {
                Coord got;
                try {
                    got = corner_border_coords(static_cast<std::uint32_t>(k + 1), c1, c2, c3);
                } catch (const Error& e) {
                    rep.pass = false;
                    rep.detail = std::string(e.what());
                    break;
                }
                if (got != walk[k] || !seen.insert(got).second) {
                    rep.pass = false;
                    std::ostringstream os;
                    os << m << "x" << n << " count " << k + 1 << ": got (" << got.x << "," << got.y << "), walk ("
                       << walk[k].x << "," << walk[k].y << ")";
                    rep.detail = os.str();
                    break;
                }
            }
            if (!rep.pass) {
                break;
            }
            const auto dims = swarm_dimensions(c1, c2, c3, static_cast<std::uint32_t>(walk.size()));
            if (dims != Dimensions{m, n, m * n}) {
                rep.pass = false;
                rep.detail = "swarm_dimensions mismatch on " + std::to_string(m) + "x" + std::to_string(n);
            }
        }
    }
    if (rep.pass) {
        rep.detail = std::to_string(rep.cases) + " lattices";
    }
    return rep;
}

std::size_t middle_closure_errors(std::uint32_t m, std::uint32_t n) {
    std::vector<Coord> grid(static_cast<std::size_t>(m) * n);
    auto at = [&](std::uint32_t x, std::uint32_t y) -> Coord& { return grid[(y - 1) * m + (x - 1)]; };
    for (const auto& c : perimeter_walk(m, n)) {
        at(c.x, c.y) = c;
    }
    for (bool changed = true; changed;) {
        changed = false;
        const auto snapshot = grid;
        auto snap = [&](std::uint32_t x, std::uint32_t y) { return snapshot[(y - 1) * m + (x - 1)]; };
        for (std::uint32_t y = 2; y < n; ++y) {
            for (std::uint32_t x = 2; x < m; ++x) {
                Coord& me = at(x, y);
                if (me.assigned()) {
                    continue;
                }
                std::vector<Coord> heard;
                for (int ddy = -1; ddy <= 1; ++ddy) {
                    for (int ddx = -1; ddx <= 1; ++ddx) {
                        if (ddx == 0 && ddy == 0) {
                            continue;
                        }
                        const Coord c = snap(x + ddx, y + ddy);
                        if (c.partial()) {
                            heard.push_back(c);
                        }
                    }
                }
                const auto inferred = infer_middle_coord(heard);
                if (me.x == 0 && inferred.x) {
                    me.x = *inferred.x;
                    changed = true;
                }
                if (me.y == 0 && inferred.y) {
                    me.y = *inferred.y;
                    changed = true;
                }
            }
        }
    }
    std::size_t errors = 0;
    for (std::uint32_t y = 2; y < n; ++y) {
        for (std::uint32_t x = 2; x < m; ++x) {
            if (at(x, y) != Coord{static_cast<std::uint16_t>(x), static_cast<std::uint16_t>(y)}) {
                ++errors;
            }
        }
    }
    return errors;
}

SuiteReport middle_closure_suite(std::size_t count, std::uint64_t seed) {
    SuiteReport rep;
    rep.name = "middle-closure";
    Rng rng(seed);
    std::uniform_int_distribution<std::uint32_t> width(3, 40);
    std::uniform_int_distribution<std::uint32_t> height(3, 25);
    for (std::size_t k = 0; k < count; ++k) {
        const auto m = width(rng);
        const auto n = height(rng);
        ++rep.cases;
        if (const auto bad = middle_closure_errors(m, n); bad > 0) {
            rep.pass = false;
            rep.detail = std::to_string(bad) + " interior cells wrong on " + std::to_string(m) + "x" + std::to_string(n);
            return rep;
        }
    }
    rep.detail = std::to_string(rep.cases) + " lattices";
    return rep;
}

SuiteReport eq1_sweep_suite(const SweepConfig& cfg) {
    SuiteReport rep;
    rep.name = "eq1-sweep";
    std::size_t formula_inside = 0;
    std::size_t formula_outside = 0;
    for (double x = cfg.x_lo; x <= cfg.x_hi + 1e-9; x += cfg.step) {
        const double r = neighborhood_radius(x);
        if (!(r < 2.0 * x)) {
            rep.pass = false;
            rep.detail = "radius not below 2x at x=" + std::to_string(x);
            return rep;
        }
        const double root3x = std::numbers::sqrt3 * x;
        const double b0 = spacing_bound(x, 0.0);
        if (std::abs(b0 - root3x) > 1e-9 * root3x) {
            rep.pass = false;
            rep.detail = "eps=0 bound differs from sqrt(3)x at x=" + std::to_string(x);
            return rep;
        }
        for (double y = x; y < root3x; y += cfg.step) {
            ++rep.cases;
            const double diag = std::hypot(x, y);
            if (!(diag < 2.0 * x)) {
                rep.pass = false;
                rep.detail = "admissible radius interval empty at x=" + std::to_string(x) + " y=" + std::to_string(y);
                return rep;
            }
            (diag < r ? formula_inside : formula_outside) += 1;
        }
        double prev = INFINITY;
        for (double eps : cfg.eps) {
            double b = 0.0;
            try {
                b = spacing_bound(x, eps);
            } catch (const Error& e) {
                if (e.code() != ErrorCode::EpsOutOfRange) {
                    throw;
                }
                if (x == cfg.x_lo) {
                    rep.notes.push_back("eps=" + std::to_string(eps) + ": EPS_OUT_OF_RANGE");
                }
                continue;
            }
            if (!(b < prev)) {
                rep.pass = false;
                rep.detail = "bound not decreasing in eps at x=" + std::to_string(x);
                return rep;
            }
            prev = b;
        }
    }
    rep.notes.push_back("1.5x+10 above the diagonal at " + std::to_string(formula_inside) + " of " +
                        std::to_string(formula_inside + formula_outside) + " (x,y) grid points");
    rep.detail = std::to_string(rep.cases) + " (x,y) points";
    return rep;
}

}  // namespace latticeloc
