#include "latticeloc/plan.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace latticeloc {

bool PlanRule::matches(Coord c) const {
    if (!c.assigned()) {
        return false;
    }
    if (kind == Kind::Rect) {
        return c.x >= lo.x && c.x <= hi.x && c.y >= lo.y && c.y <= hi.y;
    }
    if (c.x < anchor.x || c.y > anchor.y) {
        return false;
    }
    const std::size_t row = anchor.y - c.y;
    const std::size_t col = c.x - anchor.x;
    return row < rows.size() && col < rows[row].size() && rows[row][col] == '#';
}

std::optional<std::size_t> ActionPlan::step_index(std::uint32_t step) const {
    if (steps.empty()) {
        return std::nullopt;
    }
    if (cyclic) {
        return step % steps.size();
    }
    if (step < steps.size()) {
        return step;
    }
    return std::nullopt;
}

Role ActionPlan::role_at(Coord c, std::uint32_t step, std::optional<Dimensions> dims) const {
    const auto idx = step_index(step);
    if (!idx || !c.assigned()) {
        return Role::off();
    }
    if (dims && (c.x > dims->width || c.y > dims->height)) {
        return Role::off();
    }
    for (const auto& rule : steps[*idx].rules) {
        if (rule.matches(c)) {
            return rule.role;
        }
    }
    return Role::off();
}

std::set<Coord> ActionPlan::lit_cells(std::uint32_t step, std::uint32_t width, std::uint32_t height) const {
    std::set<Coord> lit;
    for (std::uint32_t y = 1; y <= height; ++y) {
        for (std::uint32_t x = 1; x <= width; ++x) {
            const Coord c{static_cast<std::uint16_t>(x), static_cast<std::uint16_t>(y)};
            if (role_at(c, step).is_lit()) {
                lit.insert(c);
            }
        }
    }
    return lit;
}

namespace {

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void fail(std::size_t line, const std::string& why) {
    throw Error(ErrorCode::ParseError, "plan line " + std::to_string(line) + ": " + why);
}

Role parse_role(const std::string& word, std::size_t line) {
    if (word == "off") {
        return Role::off();
    }
    if (word == "departed") {
        return Role::departed();
    }
    if (auto c = parse_color(word)) {
        return Role::lit(*c);
    }
    fail(line, "unknown role '" + word + "'");
}

std::uint16_t parse_index(const std::string& tok, std::size_t line) {
    if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](unsigned char ch) { return std::isdigit(ch); })) {
        fail(line, "expected a coordinate, got '" + tok + "'");
    }
    const unsigned long v = std::stoul(tok);
    if (v == 0 || v > 0xFFFF) {
        fail(line, "coordinate out of range '" + tok + "'");
    }
    return static_cast<std::uint16_t>(v);
}

}  // namespace

ActionPlan parse_plan(std::string_view text) {
    ActionPlan plan;
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line_no = 0;
    PlanRule* open_glyph = nullptr;
    std::size_t glyph_line = 0;

    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = trim(raw);

        if (open_glyph) {
            if (line == "end") {
                if (open_glyph->rows.empty()) {
                    fail(line_no, "empty glyph");
                }
                open_glyph = nullptr;
                continue;
            }
            if (line.empty() || line.find_first_not_of(".#") != std::string::npos) {
                fail(line_no, "glyph rows may only contain '.' and '#'");
            }
            if (open_glyph->anchor.y < open_glyph->rows.size() + 1) {
                fail(line_no, "glyph extends below y=1");
            }
            open_glyph->rows.push_back(line);
            continue;
        }

        if (line.empty() || line[0] == '#') {
            continue;
        }

        if (auto eq = line.find('='); eq != std::string::npos) {
            const std::string key = trim(std::string_view(line).substr(0, eq));
            const std::string value = trim(std::string_view(line).substr(eq + 1));
            if (key == "step_seconds") {
                try {
                    plan.step_seconds = std::stod(value);
                } catch (const std::exception&) {
                    fail(line_no, "bad step_seconds");
                }
                if (!(plan.step_seconds > 0.0)) {
                    fail(line_no, "step_seconds must be positive");
                }
            } else if (key == "cyclic") {
                if (value != "true" && value != "false") {
                    fail(line_no, "cyclic must be true or false");
                }
                plan.cyclic = value == "true";
            } else {
                fail(line_no, "unknown setting '" + key + "'");
            }
            continue;
        }

        std::istringstream words(line);
        std::string head;
        words >> head;
        if (head == "step") {
            plan.steps.emplace_back();
            continue;
        }
        if (plan.steps.empty()) {
            fail(line_no, "rule before first 'step'");
        }
        if (head == "rect") {
            std::string t[4], arrow, role;
            words >> t[0] >> t[1] >> t[2] >> t[3] >> arrow >> role;
            std::string extra;
            if (arrow != "->" || role.empty() || (words >> extra)) {
                fail(line_no, "expected 'rect X1 Y1 X2 Y2 -> ROLE'");
            }
            PlanRule r;
            r.kind = PlanRule::Kind::Rect;
            const auto x1 = parse_index(t[0], line_no), y1 = parse_index(t[1], line_no);
            const auto x2 = parse_index(t[2], line_no), y2 = parse_index(t[3], line_no);
            r.lo = Coord{std::min(x1, x2), std::min(y1, y2)};
            r.hi = Coord{std::max(x1, x2), std::max(y1, y2)};
            r.role = parse_role(role, line_no);
            plan.steps.back().rules.push_back(std::move(r));
            continue;
        }
        if (head == "glyph") {
            std::string arrow, role, at, pos;
            words >> arrow >> role >> at;
            std::getline(words, pos);
            pos = trim(pos);
            std::replace(pos.begin(), pos.end(), ',', ' ');
            std::istringstream ps(pos);
            std::string xs, ys, extra;
            ps >> xs >> ys;
            if (arrow != "->" || at != "at" || ys.empty() || (ps >> extra)) {
                fail(line_no, "expected 'glyph -> ROLE at X,Y'");
            }
            PlanRule r;
            r.kind = PlanRule::Kind::Glyph;
            r.role = parse_role(role, line_no);
            r.anchor = Coord{parse_index(xs, line_no), parse_index(ys, line_no)};
            plan.steps.back().rules.push_back(std::move(r));
            open_glyph = &plan.steps.back().rules.back();
            glyph_line = line_no;
            continue;
        }
        fail(line_no, "unrecognised statement '" + head + "'");
    }
    if (open_glyph) {
        fail(glyph_line, "glyph not terminated by 'end'");
    }
    if (plan.steps.empty()) {
        fail(line_no, "plan has no steps");
    }
    return plan;
}

ActionPlan load_plan(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::ParseError, "cannot open plan file " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_plan(ss.str());
}

}  // namespace latticeloc
