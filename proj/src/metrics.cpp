#include "latticeloc/metrics.hpp"

#include <cstdio>

namespace latticeloc {

namespace {

std::string seconds(const RunResult& r, std::optional<std::uint64_t> tick) {
    if (!tick) {
        return {};
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", r.seconds(*tick));
    return buf;
}

}  // namespace

std::string metrics_row(const RunResult& r) {
    std::string sym;
    if (r.verify && r.verify->symmetry) {
        sym = std::string(to_string(*r.verify->symmetry));
    }
    std::string row;
    row += std::to_string(r.seed);
    row += ',';
    row += r.success() ? "1" : "0";
    row += ',' + seconds(r, r.ticks);
    row += ',' + seconds(r, r.r1_done_tick);
    row += ',' + seconds(r, r.r2_done_tick);
    row += ',' + r.origin_corner;
    row += ',' + sym;
    row += ',' + std::to_string(r.msgs_sent);
    row += ',' + std::to_string(r.msgs_dropped);
    return row;
}

}  // namespace latticeloc
