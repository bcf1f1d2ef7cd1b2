#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "latticeloc/plan.hpp"
#include "latticeloc/protocol.hpp"

using namespace latticeloc;

namespace {

std::string src(const char* rel) { return std::string(LATTICELOC_SOURCE_DIR) + "/" + rel; }

// Cells of a mask drawn top row first, with its top-left cell at (x0, y0).
std::set<Coord> mask(std::initializer_list<const char*> rows, int x0, int y0) {
    std::set<Coord> out;
    int y = y0;
    for (const char* r : rows) {
        for (int i = 0; r[i]; ++i) {
            if (r[i] == '#') out.insert(Coord{static_cast<std::uint16_t>(x0 + i), static_cast<std::uint16_t>(y)});
        }
        --y;
    }
    return out;
}

std::set<Coord> shifted(const std::set<Coord>& s, int dx) {
    std::set<Coord> out;
    for (auto c : s) out.insert(Coord{static_cast<std::uint16_t>(c.x + dx), c.y});
    return out;
}

}  // namespace

TEST_CASE("settings, rects and first-match lookup") {
    const auto p = parse_plan(
        "# demo\n"
        "step_seconds = 4\n"
        "cyclic = false\n"
        "step\n"
        "rect 2 2 3 3 -> blue\n"
        "rect 1 1 5 5 -> red\n"
        "step\n"
        "rect 1 1 1 1 -> departed\n");
    CHECK(p.step_seconds == 4);
    CHECK_FALSE(p.cyclic);
    REQUIRE(p.steps.size() == 2);
    CHECK(p.role_at({2, 3}, 0) == Role::lit(Color::Blue));
    CHECK(p.role_at({4, 4}, 0) == Role::lit(Color::Red));
    CHECK(p.role_at({6, 6}, 0) == Role::off());
    CHECK(p.role_at({1, 1}, 1) == Role::departed());
    CHECK(p.role_at({2, 1}, 1) == Role::off());
    CHECK_FALSE(p.step_index(2).has_value());
    CHECK(p.role_at({1, 1}, 2) == Role::off());
}

TEST_CASE("cyclic plans wrap") {
    const auto p = parse_plan("step\nrect 1 1 1 1 -> red\nstep\nrect 1 1 1 1 -> green\n");
    CHECK(p.cyclic);
    CHECK(p.step_index(5) == std::optional<std::size_t>{1});
    CHECK(p.role_at({1, 1}, 4) == Role::lit(Color::Red));
}

TEST_CASE("rect corners may be given in any order") {
    const auto p = parse_plan("step\nrect 3 3 1 1 -> cyan\n");
    CHECK(p.role_at({2, 2}, 0) == Role::lit(Color::Cyan));
}

TEST_CASE("glyph rows run downward from the anchor") {
    const auto p = parse_plan("step\nglyph -> yellow at 2,3\n#.\n.#\nend\n");
    CHECK(p.lit_cells(0, 5, 5) == std::set<Coord>{{2, 3}, {3, 2}});
}

TEST_CASE("cells outside known dimensions are off") {
    const auto p = parse_plan("step\nrect 1 1 9 9 -> red\n");
    CHECK(r3_role(p, {4, 4}, Dimensions{3, 3, 9}, 0) == Role::off());
    CHECK(r3_role(p, {3, 3}, Dimensions{3, 3, 9}, 0) == Role::lit(Color::Red));
    CHECK(r3_role(p, {4, 4}, std::nullopt, 0) == Role::lit(Color::Red));
}

TEST_CASE("portrait frames read the plan with axes swapped") {
    const auto p = parse_plan("step\nrect 5 1 5 2 -> green\n");
    CHECK(r3_role(p, {5, 1}, Dimensions{6, 3, 18}, 0) == Role::lit(Color::Green));
    CHECK(r3_role(p, {1, 5}, Dimensions{3, 6, 18}, 0) == Role::lit(Color::Green));
    CHECK(r3_role(p, {5, 1}, Dimensions{3, 6, 18}, 0) == Role::off());
}

TEST_CASE("parse errors name the line") {
    auto line_of = [](const char* text) -> std::string {
        try {
            parse_plan(text);
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::ParseError);
            return e.what();
        }
        return "no error";
    };
    CHECK(line_of("rect 1 1 2 2 -> red\n").find("line 1") != std::string::npos);
    CHECK(line_of("step\nrect 1 1 2 -> red\n").find("line 2") != std::string::npos);
    CHECK(line_of("step\nrect 1 1 2 2 -> purple\n").find("line 2") != std::string::npos);
    CHECK(line_of("step\nglyph -> red at 1,1\n#\n#\nend\n").find("line") != std::string::npos);
    CHECK(line_of("step\nglyph -> red at 1,5\n#x\nend\n").find("line 3") != std::string::npos);
    CHECK(line_of("step_seconds = 0\n").find("line 1") != std::string::npos);
    CHECK(line_of("colour = red\n").find("line 1") != std::string::npos);
    CHECK(line_of("\n\nstep\nwibble\n").find("line 4") != std::string::npos);
}

TEST_CASE("N-J-I-T plan matches hand-drawn masks") {
    const auto p = load_plan(src("plans/njit.plan"));
    REQUIRE(p.steps.size() == 4);
    CHECK(p.lit_cells(0, 5, 5) == mask({"#...#", "##..#", "#.#.#", "#..##", "#...#"}, 1, 5));
    CHECK(p.lit_cells(1, 5, 5) == mask({"..###", "...#.", "...#.", "#..#.", ".##.."}, 1, 5));
    CHECK(p.lit_cells(2, 5, 5) == mask({".###.", "..#..", "..#..", "..#..", ".###."}, 1, 5));
    CHECK(p.lit_cells(3, 5, 5) == mask({"#####", "..#..", "..#..", "..#..", "..#.."}, 1, 5));
}

TEST_CASE("SWARM plan second step is the first shifted two columns") {
    const auto p = load_plan(src("plans/swarm.plan"));
    REQUIRE(p.steps.size() == 2);
    const auto a = p.lit_cells(0, 25, 8);
    const auto b = p.lit_cells(1, 25, 8);
    CHECK_FALSE(a.empty());
    CHECK(b == shifted(a, 2));
    CHECK(p.role_at(*a.begin(), 0).color != p.role_at(*b.begin(), 1).color);
}

TEST_CASE("shipped plans all parse") {
    for (auto f : {"plans/njit.plan", "plans/hello.plan", "plans/world.plan", "plans/swarm.plan", "plans/depart.plan"}) {
        CHECK_NOTHROW(load_plan(src(f)));
    }
    CHECK_THROWS_AS(load_plan(src("plans/missing.plan")), Error);
}
