#include "latticeloc/protocol.hpp"

#include <algorithm>
#include <set>

#include "latticeloc/geometry.hpp"

namespace latticeloc {

void Timers::validate() const {
    if (t1 == 0 || t2 <= t1 || t3 <= t2 + repair_delay || t4 == 0 || sr1c == 0 || axes == 0 || sr2c == 0 ||
        r3_step == 0) {
        throw Error(ErrorCode::InvalidSpec, "timer limits must be positive and increasing (t1 < t2 < t2+repair < t3)");
    }
}

std::optional<std::uint32_t> ProtocolConfig::phase_duration(Phase p) const {
    switch (p.stage()) {
        case Stage::Sr1aP1:
            return timers.t1;
        case Stage::Sr1aP2:
            return timers.t2 - timers.t1;
        case Stage::Sr1bP2:
            return timers.repair_delay;
        case Stage::Sr1bRepair:
            return timers.t3 - timers.t2 - timers.repair_delay;
        case Stage::Sr1c:
            return timers.sr1c;
        case Stage::Sr2aElect:
            return timers.t4;
        case Stage::Sr2aAxes:
            return timers.axes;
        case Stage::Sr2bCount:
        case Stage::Sr2bDistribute:
            return std::nullopt;
        case Stage::Sr2c:
            return timers.sr2c;
        case Stage::R3:
            return timers.r3_step;
    }
    return std::nullopt;
}

std::string_view to_string(Fault f) {
    switch (f) {
        case Fault::None:
            return "none";
        case Fault::FullBlacklist:
            return "FULL_BLACKLIST";
        case Fault::Isolated:
            return "ISOLATED";
        case Fault::OriginDegenerate:
            return "ORIGIN_DEGENERATE";
        case Fault::CountInconsistent:
            return "COUNT_INCONSISTENT";
    }
    return "?";
}

NeighborRecord* AgentState::find_neighbor(LocalId who) {
    auto it = std::find_if(neighbors.begin(), neighbors.end(), [&](const NeighborRecord& r) { return r.id == who; });
    return it == neighbors.end() ? nullptr : &*it;
}

const NeighborRecord* AgentState::find_neighbor(LocalId who) const {
    return const_cast<AgentState*>(this)->find_neighbor(who);
}

std::optional<double> AgentState::radius() const {
    if (!min_msg_distance) {
        return std::nullopt;
    }
    return neighborhood_radius(*min_msg_distance);
}

// ---------------------------------------------------------------------------

void sr1a_handle(AgentState& s, const Message& msg, Rng& rng) {
    const auto stage = s.phase.stage();
    if (stage != Stage::Sr1aP1 && stage != Stage::Sr1aP2) {
        return;
    }
    const auto sender = sender_id(msg);
    if (!sender) {
        return;
    }
    bool duplicate = *sender == s.id;
    s.blacklist.set(sender->value);

    if (const auto* relay = std::get_if<RelayMsg>(&msg)) {
        if (relay->relay && *relay->relay != std::pair{s.id, s.nonce}) {
            s.blacklist.set(relay->relay->first.value);
        }
        if (stage == Stage::Sr1aP2) {
            const std::pair entry{relay->id, relay->nonce};
            if (std::find(s.id_list.begin(), s.id_list.end(), entry) == s.id_list.end()) {
                s.id_list.push_back(entry);
            }
            if (relay->relay && relay->relay->first == s.id && relay->relay->second != s.nonce) {
                duplicate = true;
            }
        }
    }

    if (duplicate) {
        s.blacklist.set(s.id.value);
        try {
            s.id = pick_fresh_id(s.blacklist, rng);
        } catch (const Error&) {
            s.fault = Fault::FullBlacklist;
        }
    }
}

void track_min_distance(AgentState& s, double dist_mm, double body_length_mm) {
    if (dist_mm >= body_length_mm && (!s.min_msg_distance || dist_mm < *s.min_msg_distance)) {
        s.min_msg_distance = dist_mm;
    }
}

void sr1b_filter(AgentState& s, LocalId sender, double dist_mm) {
    if (s.phase.stage() != Stage::Sr1bP2) {
        return;
    }
    const auto r = s.radius();
    if (!r) {
        return;
    }
    if (auto* known = s.find_neighbor(sender)) {
        known->last_distance_mm = dist_mm;
        return;
    }
    if (dist_mm < *r) {
        s.neighbors.push_back(NeighborRecord{sender, dist_mm, std::nullopt, PositionGroup::Unknown, Coord{}});
    }
}

void sr1b_repair(AgentState& s, const RepairMsg& msg, double dist_mm) {
    if (s.phase.stage() != Stage::Sr1bRepair || msg.sender == s.id) {
        return;
    }
    const bool listed = std::find(msg.neighbours.begin(), msg.neighbours.end(), s.id) != msg.neighbours.end();
    if (listed && !s.find_neighbor(msg.sender)) {
        s.neighbors.push_back(NeighborRecord{msg.sender, dist_mm, std::nullopt, PositionGroup::Unknown, Coord{}});
    }
}

PositionGroup classify_position(unsigned my_count, std::span<const unsigned> neighbor_counts) {
    if (neighbor_counts.empty()) {
        return PositionGroup::Fault;
    }
    const auto [lo, hi] = std::minmax_element(neighbor_counts.begin(), neighbor_counts.end());
    if (my_count < *lo) {
        return PositionGroup::Corner;
    }
    if (my_count >= *hi) {
        return PositionGroup::Middle;
    }
    return PositionGroup::Border;
}

namespace {

void classify_from_known(AgentState& s) {
    std::vector<unsigned> counts;
    for (const auto& n : s.neighbors) {
        if (n.neighbor_count) {
            counts.push_back(*n.neighbor_count);
        }
    }
    s.position = classify_position(s.neighbor_count(), counts);
}

}  // namespace

void sr1c_handle(AgentState& s, const CountMsg& msg) {
    if (s.phase.stage() != Stage::Sr1c) {
        return;
    }
    auto* n = s.find_neighbor(msg.id);
    if (!n) {
        return;
    }
    n->neighbor_count = msg.neighbour_count;
    if (msg.position != PositionGroup::Unknown) {
        n->position = msg.position;
    }
    if (s.position == PositionGroup::Unknown &&
        std::all_of(s.neighbors.begin(), s.neighbors.end(),
                    [](const NeighborRecord& r) { return r.neighbor_count.has_value(); })) {
        classify_from_known(s);
    }
}

void sr1c_finalize(AgentState& s) {
    if (s.position != PositionGroup::Unknown) {
        return;
    }
    const bool any = std::any_of(s.neighbors.begin(), s.neighbors.end(),
                                 [](const NeighborRecord& r) { return r.neighbor_count.has_value(); });
    if (!any) {
        s.position = PositionGroup::Fault;
        if (s.fault == Fault::None) {
            s.fault = Fault::Isolated;
        }
        return;
    }
    classify_from_known(s);
}

// ---------------------------------------------------------------------------

void sr2a_elect(AgentState& s, const TokenMsg& msg) {
    if (s.phase.stage() != Stage::Sr2aElect) {
        return;
    }
    if (s.position == PositionGroup::Corner) {
        if (s.origin_candidate && msg.token < s.origin_token) {
            s.origin_candidate = false;
            s.outgoing.reset();
        }
        return;
    }
    if (!s.relayed_token || msg.token < *s.relayed_token) {
        s.relayed_token = msg.token;
        s.outgoing = TokenMsg{msg.token};
    }
}

AxesMsg sr2a_assign_axes(AgentState& s) {
    s.is_origin = true;
    s.coord = Coord{1, 1};
    s.my_count = 1;
    std::vector<LocalId> borders;
    for (const auto& n : s.neighbors) {
        if (n.position == PositionGroup::Border) {
            borders.push_back(n.id);
        }
    }
    std::sort(borders.begin(), borders.end());
    borders.erase(std::unique(borders.begin(), borders.end()), borders.end());
    if (borders.size() != 2) {
        throw Error(ErrorCode::OriginDegenerate,
                    "origin sees " + std::to_string(borders.size()) + " BORDER neighbours, expected 2");
    }
    return AxesMsg{s.id, 1, 1, borders.front()};
}

void sr2a_axes_handle(AgentState& s, const AxesMsg& msg) {
    const auto stage = s.phase.stage();
    if (stage != Stage::Sr2aAxes && stage != Stage::Sr2bCount) {
        return;
    }
    if (s.position != PositionGroup::Border || msg.x != 1 || msg.y != 1 || s.coord.partial()) {
        return;
    }
    if (!s.find_neighbor(msg.origin)) {
        return;
    }
    s.origin_id = msg.origin;
    if (msg.lower_id_border == s.id) {
        s.coord = Coord{2, 1};
        s.my_count = 2;
    } else {
        s.coord = Coord{1, 2};
    }
}

bool needs_near_corner_header(const AgentState& s) {
    int corners_ahead = 0;
    for (const auto& n : s.neighbors) {
        if (n.position == PositionGroup::Corner && (!s.origin_id || n.id != *s.origin_id)) {
            ++corners_ahead;
        }
    }
    if (s.count_source_corner) {
        --corners_ahead;
    }
    return corners_ahead > 0;
}

namespace {

void fill_first_zero_slot(std::uint16_t& c1, std::uint16_t& c2, std::uint16_t& c3, std::uint16_t value) {
    if (c1 == 0) {
        c1 = value;
    } else if (c2 == 0) {
        c2 = value;
    } else if (c3 == 0) {
        c3 = value;
    }
}

}  // namespace

StepOutcome sr2b_count_step(AgentState& s, const BorderCountMsg& msg, double dist_mm) {
    if (s.phase.stage() != Stage::Sr2bCount) {
        return StepOutcome::None;
    }
    const auto r = s.radius();
    if (!r || !(dist_mm < *r)) {
        return StepOutcome::None;
    }
    const std::uint32_t c = msg.count;

    // Count messages carry no sender ID, so a single short reading could come from two hops away.
    auto confirmed = [&s, &msg] {
        if (s.pending_count == msg) {
            ++s.pending_hits;
        } else {
            s.pending_count = msg;
            s.pending_hits = 1;
        }
        return s.pending_hits >= s.count_confirmations;
    };

    if (s.is_origin) {
        if (c > 3 && !s.totals_known && confirmed()) {
            s.total_count = msg.count;
            s.c1 = msg.c1;
            s.c2 = msg.c2;
            s.c3 = msg.c3;
            s.totals_known = true;
            return StepOutcome::OriginComplete;
        }
        return StepOutcome::None;
    }
    if (s.my_count != 0 || c + 1 > 0xFFFF) {
        return StepOutcome::None;
    }

    if (s.position == PositionGroup::Corner) {
        if (c < 2 || !confirmed()) {
            return StepOutcome::None;
        }
        s.my_count = static_cast<std::uint16_t>(c + 1);
        s.c1 = msg.c1;
        s.c2 = msg.c2;
        s.c3 = msg.c3;
        fill_first_zero_slot(s.c1, s.c2, s.c3, s.my_count);
        s.outgoing = BorderCountMsg{false, true, s.my_count, s.c1, s.c2, s.c3};
        return StepOutcome::Accepted;
    }

    if (s.position == PositionGroup::Border) {
        if (msg.near_corner) {
            return StepOutcome::None;
        }
        const bool is_y_axis_start = s.coord == Coord{1, 2};
        if ((is_y_axis_start ? c <= 3 : c < 2) || !confirmed()) {
            return StepOutcome::None;
        }
        s.my_count = static_cast<std::uint16_t>(c + 1);
        s.count_source_corner = msg.from_corner;
        s.c1 = msg.c1;
        s.c2 = msg.c2;
        s.c3 = msg.c3;
        s.outgoing = BorderCountMsg{needs_near_corner_header(s), false, s.my_count, s.c1, s.c2, s.c3};
        return StepOutcome::Accepted;
    }
    return StepOutcome::None;
}

StepOutcome sr2b_distribute(AgentState& s, const TotalsMsg& msg) {
    if (s.phase.stage() != Stage::Sr2bDistribute) {
        return StepOutcome::None;
    }
    if (s.is_origin) {
        return s.totals_known && msg.sender_count == s.total_count ? StepOutcome::OriginComplete : StepOutcome::None;
    }
    if ((s.position != PositionGroup::Border && s.position != PositionGroup::Corner) || s.my_count == 0 ||
        s.totals_known || msg.sender_count + 1 != s.my_count) {
        return StepOutcome::None;
    }
    s.total_count = msg.total;
    s.c1 = msg.c1;
    s.c2 = msg.c2;
    s.c3 = msg.c3;
    s.totals_known = true;
    s.outgoing = TotalsMsg{s.my_count, s.total_count, s.c1, s.c2, s.c3};
    return StepOutcome::Accepted;
}

Coord corner_border_coords(std::uint32_t my_count, std::uint32_t c1, std::uint32_t c2, std::uint32_t c3) {
    if (my_count == 0 || c1 == 0 || !(c1 < c2 && c2 < c3)) {
        throw Error(ErrorCode::CountInconsistent, "corner counts must satisfy 0 < c1 < c2 < c3");
    }
    const long m = my_count;
    const long a = c1;
    const long b = c2;
    const long c = c3;
    long x = 0;
    long y = 0;
    if (m <= a) {
        x = m;
        y = 1;
    } else if (m <= b) {
        x = a;
        y = m - a + 1;
    } else if (m <= c) {
        x = a + b - m;
        y = b - a + 1;
    } else {
        x = 1;
        y = b + c - a - m + 1;
    }
    if (x < 1 || x > a || y < 1 || y > b - a + 1) {
        throw Error(ErrorCode::CountInconsistent, "border count " + std::to_string(my_count) + " maps outside lattice");
    }
    return Coord{static_cast<std::uint16_t>(x), static_cast<std::uint16_t>(y)};
}

AxisAssignment infer_middle_coord(std::span<const Coord> neighbor_coords) {
    std::set<std::uint16_t> xs;
    std::set<std::uint16_t> ys;
    for (const auto& c : neighbor_coords) {
        if (c.x != 0) {
            xs.insert(c.x);
        }
        if (c.y != 0) {
            ys.insert(c.y);
        }
    }
    auto middle_of_run = [](const std::set<std::uint16_t>& values) -> std::optional<std::uint16_t> {
        for (auto v : values) {
            if (v >= 2 && values.count(static_cast<std::uint16_t>(v - 1)) &&
                values.count(static_cast<std::uint16_t>(v + 1))) {
                return v;
            }
        }
        return std::nullopt;
    };
    return {middle_of_run(xs), middle_of_run(ys)};
}

Dimensions swarm_dimensions(std::uint32_t c1, std::uint32_t c2, std::uint32_t c3, std::uint32_t total) {
    const long w = c1;
    const long h = static_cast<long>(c2) - static_cast<long>(c1) + 1;
    if (w < 1 || h < 1 || static_cast<long>(c3) - static_cast<long>(c2) + 1 != w ||
        static_cast<long>(total) != 2 * (w + h) - 4) {
        throw Error(ErrorCode::CountInconsistent, "perimeter counts are inconsistent");
    }
    return Dimensions{static_cast<std::uint32_t>(w), static_cast<std::uint32_t>(h),
                      static_cast<std::uint32_t>(w * h)};
}

// ---------------------------------------------------------------------------

SyncOutcome sync_advance(AgentState& s, SyncTrigger trigger) {
    Phase target = s.phase.next();
    if (trigger.kind == SyncTrigger::Kind::Message) {
        if (trigger.target <= s.phase) {
            return {};
        }
        target = trigger.target;
    }
    SyncOutcome out;
    out.advanced = true;
    out.skewed = target.index > s.phase.index + 1;
    if (out.skewed) {
        ++s.phase_skew_events;
    }
    s.phase = target;
    s.phase_start_tick = s.local_tick;
    s.sync_pending = true;
    return out;
}

Role r3_role(const ActionPlan& plan, Coord coord, std::optional<Dimensions> dims, std::uint32_t step) {
    if (dims && dims->width < dims->height) {
        // plans are drawn landscape; a portrait frame reads them with its axes swapped
        std::swap(coord.x, coord.y);
        return plan.role_at(coord, step, Dimensions{dims->height, dims->width, dims->population});
    }
    return plan.role_at(coord, step, dims);
}

}  // namespace latticeloc
