#include "latticeloc/scenario.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace latticeloc {

ProtocolConfig Scenario::protocol() const {
    ProtocolConfig p;
    p.timers = timers;
    p.repair_enabled = repair;
    p.body_length_mm = body_length_mm;
    p.depart_silence_ticks = depart_silence_ticks;
    p.msg_period_ticks = sim.msg_period_ticks();
    if (!plan_path.empty()) {
        p.plan = std::make_shared<const ActionPlan>(load_plan(plan_path));
    }
    return p;
}

void Scenario::validate() const {
    lattice.validate();
    sim.validate();
    noise.validate();
    timers.validate();
    validate_range(lattice, sim);
}

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void fail(std::size_t line, const std::string& why) {
    throw Error(ErrorCode::ParseError, "scenario line " + std::to_string(line) + ": " + why);
}

double to_double(const std::string& v, std::size_t line) {
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size()) {
            fail(line, "trailing characters in number '" + v + "'");
        }
        return d;
    } catch (const std::invalid_argument&) {
        fail(line, "expected a number, got '" + v + "'");
    } catch (const std::out_of_range&) {
        fail(line, "number out of range '" + v + "'");
    }
}

std::uint64_t to_uint(const std::string& v, std::size_t line) {
    if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos) {
        fail(line, "expected a non-negative integer, got '" + v + "'");
    }
    try {
        return std::stoull(v);
    } catch (const std::out_of_range&) {
        fail(line, "integer out of range '" + v + "'");
    }
}

std::uint32_t to_u32(const std::string& v, std::size_t line) {
    const auto x = to_uint(v, line);
    if (x > UINT32_MAX) {
        fail(line, "integer out of range '" + v + "'");
    }
    return static_cast<std::uint32_t>(x);
}

bool to_bool(const std::string& v, std::size_t line) {
    if (v == "true" || v == "on" || v == "1") {
        return true;
    }
    if (v == "false" || v == "off" || v == "0") {
        return false;
    }
    fail(line, "expected true or false, got '" + v + "'");
}

}  // namespace

Scenario parse_scenario(std::string_view text, const std::string& base_dir) {
    Scenario sc;
    bool dy_given = false;
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (const auto hash = raw.find('#'); hash != std::string::npos) {
            raw.erase(hash);
        }
        const std::string l = trim(raw);
        if (l.empty()) {
            continue;
        }
        const auto eq = l.find('=');
        if (eq == std::string::npos) {
            fail(line, "expected 'key = value'");
        }
        const std::string key = trim(std::string_view(l).substr(0, eq));
        const std::string v = trim(std::string_view(l).substr(eq + 1));

        if (key == "topology") {
            if (v == "rectangular" || v == "rect") {
                sc.lattice.topology = Topology::Rectangular;
            } else if (v == "hexagonal" || v == "hex") {
                sc.lattice.topology = Topology::Hexagonal;
            } else {
                fail(line, "unknown topology '" + v + "'");
            }
        } else if (key == "cols") {
            sc.lattice.cols = to_u32(v, line);
        } else if (key == "rows") {
            sc.lattice.rows = to_u32(v, line);
        } else if (key == "row_lengths") {
            sc.lattice.row_lengths.clear();
            std::string item;
            std::istringstream items(v);
            while (std::getline(items, item, ',')) {
                sc.lattice.row_lengths.push_back(to_u32(trim(item), line));
            }
        } else if (key == "dx_mm") {
            sc.lattice.dx_mm = to_double(v, line);
        } else if (key == "dy_mm") {
            sc.lattice.dy_mm = to_double(v, line);
            dy_given = true;
        } else if (key == "jitter_eps") {
            sc.lattice.jitter_eps = to_double(v, line);
        } else if (key == "seed") {
            sc.sim.seed = to_uint(v, line);
        } else if (key == "comm_range_mm") {
            sc.sim.comm_range_mm = to_double(v, line);
        } else if (key == "msg_rate") {
            sc.sim.msg_rate = to_double(v, line);
        } else if (key == "tick_rate") {
            sc.sim.tick_rate = to_double(v, line);
        } else if (key == "max_sim_seconds") {
            sc.sim.max_sim_seconds = to_double(v, line);
        } else if (key == "r3_steps") {
            sc.sim.r3_steps = to_u32(v, line);
        } else if (key == "drop_prob") {
            sc.noise.drop_prob = to_double(v, line);
        } else if (key == "dist_sigma_mm") {
            sc.noise.dist_sigma_mm = to_double(v, line);
        } else if (key == "dist_bias_mm") {
            sc.noise.dist_bias_mm = to_double(v, line);
        } else if (key == "clock_skew") {
            sc.noise.clock_skew_frac = to_double(v, line);
        } else if (key == "bias_frac") {
            sc.noise.stressed_frac = to_double(v, line);
        } else if (key == "bias_apart") {
            sc.noise.stressed_apart = to_bool(v, line);
        } else if (key == "bias_mm") {
            sc.noise.stressed_bias_mm = to_double(v, line);
        } else if (key == "plan") {
            const std::filesystem::path p(v);
            sc.plan_path = p.is_absolute() ? v : (std::filesystem::path(base_dir) / p).lexically_normal().string();
        } else if (key == "repair") {
            sc.repair = to_bool(v, line);
        } else if (key == "t1") {
            sc.timers.t1 = to_u32(v, line);
        } else if (key == "t2") {
            sc.timers.t2 = to_u32(v, line);
        } else if (key == "t3") {
            sc.timers.t3 = to_u32(v, line);
        } else if (key == "t4") {
            sc.timers.t4 = to_u32(v, line);
        } else if (key == "repair_delay") {
            sc.timers.repair_delay = to_u32(v, line);
        } else if (key == "sr1c_ticks") {
            sc.timers.sr1c = to_u32(v, line);
        } else if (key == "axes_ticks") {
            sc.timers.axes = to_u32(v, line);
        } else if (key == "sr2c_ticks") {
            sc.timers.sr2c = to_u32(v, line);
        } else if (key == "body_length_mm") {
            sc.body_length_mm = to_double(v, line);
        } else if (key == "depart_silence_ticks") {
            sc.depart_silence_ticks = to_u32(v, line);
        } else if (key == "frames_every") {
            sc.frames_every = to_uint(v, line);
        } else {
            fail(line, "unknown key '" + key + "'");
        }
    }
    if (!dy_given) {
        sc.lattice.dy_mm = sc.lattice.dx_mm;
    }
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::ParseError, "cannot open scenario file " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    const auto dir = std::filesystem::path(path).parent_path();
    return parse_scenario(ss.str(), dir.empty() ? "." : dir.string());
}

}  // namespace latticeloc
