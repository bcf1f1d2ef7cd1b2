// Acceptance run: one line per criterion, nonzero exit if any is red.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "latticeloc/engine.hpp"
#include "latticeloc/geometry.hpp"
#include "latticeloc/lattice.hpp"
#include "latticeloc/oracles.hpp"
#include "latticeloc/scenario.hpp"

using namespace latticeloc;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

// Pinned tolerances and sizes.
constexpr int kSeeds = 50;
constexpr double kMaxWall200 = 10.0;       // s, one 200-agent run
constexpr double kRepairRate = 0.95;
constexpr double kR2Lo = 90.0, kR2Hi = 360.0;
constexpr double kPerimeterWall = 5.0;     // s
constexpr double kBoundTol = 1e-9;
constexpr std::uint32_t kPlanSteps = 75;
constexpr double kPlanMaxSeconds = 1200.0;
constexpr int kPlanSeeds = 5;
constexpr double kBigWall = 300.0;         // s

struct Line {
    int id;
    std::string name;
    bool pass;
    std::string detail;
};
std::vector<Line> lines;

void report(int id, std::string name, bool pass, std::string detail) {
    std::printf("criterion %2d  %-34s %s  %s\n", id, name.c_str(), pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    lines.push_back({id, std::move(name), pass, std::move(detail)});
}

std::string scenario_path(const std::string& name) {
    return std::string(LATTICELOC_SOURCE_DIR) + "/scenarios/" + name + ".cfg";
}

double secs(Clock::time_point a) { return std::chrono::duration<double>(Clock::now() - a).count(); }

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double median(std::vector<double> v) {
    if (v.empty()) return NAN;
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

struct Timed {
    RunResult r;
    double wall;
};

Timed run_scenario(const Scenario& sc, std::uint64_t seed) {
    SimConfig sim = sc.sim;
    sim.seed = seed;
    const auto t0 = Clock::now();
    RunResult r = run(sc.lattice, sim, sc.noise, sc.protocol());
    return {std::move(r), secs(t0)};
}

bool dims_match(const RunResult& r) {
    if (!r.origin_dims || !r.verify || !r.verify->symmetry) return false;
    const auto m = r.truth.spec.cols, n = r.truth.spec.rows;
    const auto& d = *r.origin_dims;
    const bool swap = swaps_axes(*r.verify->symmetry);
    const auto w = swap ? n : m, h = swap ? m : n;
    return d.width == w && d.height == h && d.population == m * n;
}

// ---------------------------------------------------------------------------
// Lit masks written out by hand, top row first. '.' is off, otherwise a colour letter.

struct PlanCase {
    std::string scenario;
    std::vector<std::vector<std::string>> steps;
};

std::vector<std::string> shift2(const std::vector<std::string>& rows) {
    std::vector<std::string> out;
    for (const auto& r : rows) out.push_back(".." + r.substr(0, r.size() - 2));
    return out;
}

std::vector<PlanCase> plan_cases() {
    std::vector<PlanCase> v;
    v.push_back({"njit",
                 {{"r...r", "rr..r", "r.r.r", "r..rr", "r...r"},
                  {"..bbb", "...b.", "...b.", "b..b.", ".bb.."},
                  {".ggg.", "..g..", "..g..", "..g..", ".ggg."},
                  {"ccccc", "..c..", "..c..", "..c..", "..c.."}}});
    v.push_back({"hello",
                 {{"..........", "..........", "r..r.rrrr.", "r..r.r....", "r..r.r....", "rrrr.rrr..",
                   "r..r.r....", "r..r.r....", "r..r.rrrr.", ".........."},
                  {"..........", "..........", "b..b...bb.", "b..b..b..b", "b..b..b..b", "b..b..b..b",
                   "b..b..b..b", "b..b..b..b", "bb.bb..bb.", ".........."}}});
    v.push_back({"world",
                 {{"..........", "..........", "g...g..gg.", "g...g.g..g", "g...g.g..g", "g.g.g.g..g",
                   "g.g.g.g..g", "gg.gg.g..g", "g...g..gg.", ".........."},
                  {"..........", "..........", "cc..c..cc.", "c.c.c..c.c", "c.c.c..c.c", "cc..c..c.c",
                   "c.c.c..c.c", "c.c.c..c.c", "c.c.cc.cc.", ".........."}}});
    const std::vector<std::string> swarm0{
        ".........................", ".........................", "###.#...#..#..##..#...#..",
        "#...#...#.#.#.#.#.##.##..", "###.#.#.#.###.##..#.#.#..", "..#.##.##.#.#.#.#.#...#..",
        "###.#...#.#.#.#.#.#...#..", "........................."};
    auto paint = [](std::vector<std::string> rows, char c) {
        for (auto& r : rows) std::replace(r.begin(), r.end(), '#', c);
        return rows;
    };
    v.push_back({"swarm", {paint(swarm0, 'w'), paint(shift2(swarm0), 'm')}});
    return v;
}

char color_letter(Color c) {
    switch (c) {
        case Color::Red: return 'r';
        case Color::Green: return 'g';
        case Color::Blue: return 'b';
        case Color::Cyan: return 'c';
        case Color::Magenta: return 'm';
        case Color::Yellow: return 'y';
        case Color::White: return 'w';
    }
    return '?';
}

// Empty string when every recorded step matches its mask.
std::string check_plan_run(const RunResult& r, const PlanCase& pc) {
    if (!r.success()) return "run " + std::string(to_string(r.outcome)) + ": " + r.detail;
    if (!r.verify || !r.verify->symmetry) return "no symmetry";
    if (r.r3.size() < kPlanSteps) return "only " + std::to_string(r.r3.size()) + " steps recorded";
    const auto m = r.truth.spec.cols, n = r.truth.spec.rows;
    const Symmetry sym = *r.verify->symmetry;
    const bool swap = swaps_axes(sym);
    const std::uint32_t w = swap ? n : m, h = swap ? m : n;
    const bool portrait = w < h;
    for (std::size_t k = 0; k < r.r3.size(); ++k) {
        const auto& rec = r.r3[k];
        if (rec.last_tick - rec.first_tick > r.desync_window_ticks) {
            return "step " + std::to_string(k) + " spread " + std::to_string(rec.last_tick - rec.first_tick) +
                   " ticks > window " + std::to_string(r.desync_window_ticks);
        }
        const auto& mask = pc.steps[k % pc.steps.size()];
        for (std::size_t i = 0; i < r.truth.size(); ++i) {
            Coord a = apply(sym, r.truth.true_coord[i], m, n);
            if (portrait) std::swap(a.x, a.y);
            const std::size_t H = mask.size();
            const char want = mask[H - a.y][a.x - 1];
            const Role& got = rec.roles[i];
            const char have = got.is_lit() ? color_letter(got.color) : '.';
            if (want != have) {
                std::ostringstream os;
                os << "step " << k << " agent " << i << " at (" << a.x << "," << a.y << ") want '" << want
                   << "' got '" << have << "'";
                return os.str();
            }
        }
    }
    if (r.max_phase_spread > 1) return "phase spread " + std::to_string(r.max_phase_spread);
    return {};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

int main() {
    // 1, 4 and 5 share the noiseless runs.
    std::vector<RunResult> clean;
    std::size_t clean_pass = 0, clean_total = 0;
    double max_wall_200 = 0.0;
    std::string first_bad;
    std::vector<double> clean_r2;
    for (const char* name : {"3x3", "5x5", "10x10", "25x8"}) {
        const Scenario sc = load_scenario(scenario_path(name));
        for (int seed = 1; seed <= kSeeds; ++seed) {
            auto [r, wall] = run_scenario(sc, static_cast<std::uint64_t>(seed));
            ++clean_total;
            if (r.success()) {
                ++clean_pass;
            } else if (first_bad.empty()) {
                first_bad = std::string(name) + " seed " + std::to_string(seed) + ": " + r.detail;
            }
            if (sc.lattice.agent_count() == 200) {
                max_wall_200 = std::max(max_wall_200, wall);
                if (r.r2_done_tick) clean_r2.push_back(r.seconds(*r.r2_done_tick));
            }
            r.agents.clear();
            clean.push_back(std::move(r));
        }
    }
    report(1, "noiseless success", clean_pass == clean_total && max_wall_200 < kMaxWall200,
           std::to_string(clean_pass) + "/" + std::to_string(clean_total) + " pass, max 200-agent wall " +
               fmt("%.2f s", max_wall_200) + (first_bad.empty() ? "" : ", first failure " + first_bad));

    // 2
    const Scenario stress = load_scenario(scenario_path("repair-stress"));
    Scenario no_repair = stress;
    no_repair.repair = false;
    int with = 0, without = 0;
    std::vector<double> noisy_r2;
    std::vector<RunResult> noisy;
    for (int seed = 1; seed <= kSeeds; ++seed) {
        auto a = run_scenario(stress, static_cast<std::uint64_t>(seed)).r;
        if (a.success()) {
            ++with;
            if (a.r2_done_tick) noisy_r2.push_back(a.seconds(*a.r2_done_tick));
        }
        if (run_scenario(no_repair, static_cast<std::uint64_t>(seed)).r.success()) ++without;
        a.agents.clear();
        noisy.push_back(std::move(a));
    }
    const double rate = with / double(kSeeds), base = without / double(kSeeds);
    report(2, "repair under stressed bias", rate >= kRepairRate && base < rate,
           "with repair " + fmt("%.2f", rate) + ", without " + fmt("%.2f", base));

    // 3
    const double med = median(clean_r2), noisy_med = median(noisy_r2);
    report(3, "median R2 time on 25x8", med >= kR2Lo && med <= kR2Hi,
           "clean median " + fmt("%.1f s", med) + " over " + std::to_string(clean_r2.size()) + " runs, noisy " +
               fmt("%.1f s", noisy_med));

    // 4
    {
        std::size_t bad = 0, checked = 0;
        std::string why;
        for (const auto& r : clean) {
            ++checked;
            if (!(r.groups == expected_group_counts(r.truth.spec))) {
                if (!bad++) why = std::to_string(r.truth.spec.cols) + "x" + std::to_string(r.truth.spec.rows) +
                                  " seed " + std::to_string(r.seed);
            }
        }
        const Scenario hex = load_scenario(scenario_path("hex-4-3-4"));
        std::size_t hex_bad = 0;
        for (int seed = 1; seed <= kSeeds; ++seed) {
            SimConfig sim = hex.sim;
            sim.seed = static_cast<std::uint64_t>(seed);
            const RunResult r = run(hex.lattice, sim, hex.noise, hex.protocol());
            bool ok = r.success() && r.agents.size() == r.truth.size();
            for (std::size_t i = 0; ok && i < r.truth.size(); ++i) {
                const auto deg = r.truth.adjacency[i].size();
                const PositionGroup want = deg == 2   ? PositionGroup::Corner
                                           : deg == 6 ? PositionGroup::Middle
                                                      : PositionGroup::Border;
                ok = r.agents[i].position == want;
            }
            hex_bad += !ok;
        }
        report(4, "group partition", bad == 0 && hex_bad == 0,
               std::to_string(checked - bad) + "/" + std::to_string(checked) + " rectangular runs, hex " +
                   std::to_string(kSeeds - hex_bad) + "/" + std::to_string(kSeeds) +
                   (why.empty() ? "" : ", first mismatch " + why));
    }

    // 5
    {
        std::size_t runs = 0, ok = 0;
        for (const auto* set : {&clean, &noisy}) {
            for (const auto& r : *set) {
                if (!r.success()) continue;
                ++runs;
                ok += dims_match(r);
            }
        }
        report(5, "origin dimensions", runs > 0 && ok == runs,
               std::to_string(ok) + "/" + std::to_string(runs) + " successful runs");
    }

    // 6
    {
        const auto t0 = Clock::now();
        const SuiteReport s = perimeter_suite(40);
        const double wall = secs(t0);
        report(6, "perimeter count suite", s.pass && s.cases == 38 * 38 && wall < kPerimeterWall,
               std::to_string(s.cases) + " lattices in " + fmt("%.3f s", wall) +
                   (s.detail.empty() ? "" : ", " + s.detail));
    }

    // 7
    {
        const SuiteReport s = middle_closure_suite(100);
        report(7, "middle closure suite", s.pass && s.cases == 100,
               std::to_string(s.cases) + " lattices" + (s.detail.empty() ? "" : ", " + s.detail));
    }

    // 8: hypot(x,y) < 1.5x+10 < 2x over x in [33,110], y in [x, sqrt3 x), 1 mm grid.
    {
        std::size_t cells = 0, lower_bad = 0, upper_bad = 0;
        std::string example;
        for (int xi = 33; xi <= 110; ++xi) {
            const double x = xi;
            for (int yi = xi; yi < std::sqrt(3.0) * x; ++yi) {
                const double y = yi, r = neighborhood_radius(x), d = std::hypot(x, y);
                ++cells;
                const bool lo = d < r, hi = r < 2.0 * x;
                lower_bad += !lo;
                upper_bad += !hi;
                if ((!lo || !hi) && example.empty()) {
                    example = "x=" + fmt("%.0f", x) + " y=" + fmt("%.0f", y) + " hypot=" + fmt("%.2f", d) +
                              " radius=" + fmt("%.2f", r);
                }
            }
        }
        bool bound_ok = true;
        double prev = 0.0;
        for (double x = 33.0; x <= 110.0; x += 0.5) {
            const double b0 = spacing_bound(x, 0.0);
            bound_ok &= std::abs(b0 - std::sqrt(3.0) * x) <= kBoundTol * x;
            double last = b0;
            for (double e = 0.05; e < 0.33; e += 0.05) {
                const double b = spacing_bound(x, e);
                bound_ok &= b < last;
                last = b;
            }
            bound_ok &= b0 > prev;
            prev = b0;
        }
        report(8, "radius sandwich", lower_bad == 0 && upper_bad == 0 && bound_ok,
               std::to_string(lower_bad) + " lower and " + std::to_string(upper_bad) + " upper violations in " +
                   std::to_string(cells) + " cells" + (example.empty() ? "" : ", e.g. " + example) +
                   ", bound checks " + (bound_ok ? "ok" : "bad"));
    }

    // 9
    {
        std::size_t runs = 0, ok = 0;
        std::string why;
        for (const auto& pc : plan_cases()) {
            Scenario sc = load_scenario(scenario_path(pc.scenario));
            sc.sim.r3_steps = kPlanSteps;
            sc.sim.max_sim_seconds = kPlanMaxSeconds;
            for (int seed = 1; seed <= kPlanSeeds; ++seed) {
                ++runs;
                const auto r = run_scenario(sc, static_cast<std::uint64_t>(seed)).r;
                const std::string err = check_plan_run(r, pc);
                if (err.empty()) {
                    ++ok;
                } else if (why.empty()) {
                    why = pc.scenario + " seed " + std::to_string(seed) + ": " + err;
                }
            }
        }
        report(9, "plan display and step sync", ok == runs,
               std::to_string(ok) + "/" + std::to_string(runs) + " runs of " + std::to_string(kPlanSteps) +
                   " steps" + (why.empty() ? "" : ", " + why));
    }

    // 10
    {
        const fs::path root = fs::temp_directory_path() / "latticeloc_acceptance";
        fs::remove_all(root);
        bool same = true;
        std::size_t files = 0;
        std::string why;
        for (const char* name : {"njit", "repair-stress"}) {
            std::vector<fs::path> dirs;
            for (int k = 0; k < 2; ++k) {
                const fs::path d = root / (std::string(name) + std::to_string(k));
                const std::string cmd = std::string("\"") + LATTICELOC_CLI + "\" run \"" + scenario_path(name) +
                                        "\" --seed 9 --frames-every 320 --out \"" + d.string() + "\" > /dev/null";
                if (std::system(cmd.c_str()) == -1) same = false;
                dirs.push_back(d);
            }
            if (slurp(dirs[0] / "metrics.csv") != slurp(dirs[1] / "metrics.csv") ||
                slurp(dirs[0] / "metrics.csv").empty()) {
                same = false;
                why = std::string(name) + " metrics differ";
            }
            ++files;
            if (fs::exists(dirs[0] / "frames")) {
                for (const auto& e : fs::directory_iterator(dirs[0] / "frames")) {
                    ++files;
                    if (slurp(e.path()) != slurp(dirs[1] / "frames" / e.path().filename())) {
                        same = false;
                        why = std::string(name) + " " + e.path().filename().string() + " differs";
                    }
                }
            }
        }
        fs::remove_all(root);
        report(10, "deterministic replay", same && files > 2,
               std::to_string(files) + " files compared" + (why.empty() ? "" : ", " + why));
    }

    // 11
    {
        const Scenario sc = load_scenario(scenario_path("40x25"));
        const auto [r, wall] = run_scenario(sc, 1);
        report(11, "1000-agent run", r.success() && wall < kBigWall,
               std::string(to_string(r.outcome)) + " in " + fmt("%.2f s", wall) + " wall, " +
                   fmt("%.1f s", r.r2_done_tick ? r.seconds(*r.r2_done_tick) : NAN) + " simulated to R2");
    }

    const auto passed = std::count_if(lines.begin(), lines.end(), [](const Line& l) { return l.pass; });
    std::printf("summary: %ld/%zu criteria pass\n", static_cast<long>(passed), lines.size());
    for (const auto& l : lines) {
        if (!l.pass) std::printf("red: %d %s\n", l.id, l.name.c_str());
    }
    return passed == static_cast<long>(lines.size()) ? 0 : 1;
}
