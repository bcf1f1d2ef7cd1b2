#include "latticeloc/agent.hpp"

#include <algorithm>

namespace latticeloc {

Agent::Agent(const ProtocolConfig& config, Rng& rng) : config_(&config) {
    s_.count_confirmations = std::max<std::uint32_t>(1, config.count_confirmations);
    s_.id = pick_fresh_id(Blacklist{}, rng);
    tx_offset_ = static_cast<std::uint32_t>(rng() % config.msg_period_ticks);
}

bool Agent::silent() const {
    return s_.departed_tick && s_.local_tick - *s_.departed_tick >= config_->depart_silence_ticks;
}

void Agent::flush_distance_filter() {
    for (const auto id : reading_order_) {
        const auto& r = readings_[id.value];
        sr1b_filter(s_, id, r.sum / r.count);
    }
    reading_order_.clear();
}

void Agent::advance(SyncTrigger trigger, Rng& rng) {
    const bool moves = trigger.kind != SyncTrigger::Kind::Message || s_.phase < trigger.target;
    if (moves && s_.phase.stage() == Stage::Sr1bP2) {
        flush_distance_filter();
    }
    if (sync_advance(s_, trigger).advanced) {
        enter_phase(rng);
    }
}

void Agent::enter_phase(Rng& rng) {
    switch (s_.phase.stage()) {
        case Stage::Sr1aP1:
            break;
        case Stage::Sr1aP2:
            s_.nonce = Nonce{static_cast<std::uint8_t>(rng() & 0xFF)};
            break;
        case Stage::Sr1bP2:
            if (!s_.min_msg_distance && s_.fault == Fault::None) {
                s_.fault = Fault::Isolated;
            }
            break;
        case Stage::Sr1bRepair:
        case Stage::Sr1c:
            break;
        case Stage::Sr2aElect:
            sr1c_finalize(s_);
            s_.outgoing.reset();
            if (s_.position == PositionGroup::Corner) {
                s_.origin_candidate = true;
                s_.origin_token = OriginToken::draw(rng);
                s_.outgoing = TokenMsg{s_.origin_token};
            }
            break;
        case Stage::Sr2aAxes:
            s_.outgoing.reset();
            if (s_.origin_candidate) {
                try {
                    s_.outgoing = sr2a_assign_axes(s_);
                } catch (const Error&) {
                    s_.fault = Fault::OriginDegenerate;
                    s_.origin_candidate = false;
                }
            }
            break;
        case Stage::Sr2bCount:
            s_.outgoing.reset();
            if (s_.coord == Coord{2, 1} && s_.my_count == 2) {
                s_.outgoing = BorderCountMsg{needs_near_corner_header(s_), false, 2, 0, 0, 0};
            }
            break;
        case Stage::Sr2bDistribute:
            s_.outgoing.reset();
            if (s_.is_origin && s_.totals_known) {
                if (s_.total_count > TotalsMsg::kMaxValue) {
                    s_.fault = Fault::CountInconsistent;
                } else {
                    s_.outgoing = TotalsMsg{s_.my_count, s_.total_count, s_.c1, s_.c2, s_.c3};
                }
            }
            break;
        case Stage::Sr2c:
            s_.outgoing.reset();
            if ((s_.position == PositionGroup::Border || s_.position == PositionGroup::Corner) && s_.totals_known &&
                s_.my_count > 0) {
                try {
                    s_.dims = swarm_dimensions(s_.c1, s_.c2, s_.c3, s_.total_count);
                    const Coord c = corner_border_coords(s_.my_count, s_.c1, s_.c2, s_.c3);
                    if (s_.coord.x == 0) {
                        s_.coord.x = c.x;
                    }
                    if (s_.coord.y == 0) {
                        s_.coord.y = c.y;
                    }
                } catch (const Error&) {
                    s_.fault = Fault::CountInconsistent;
                }
            }
            infer_coords();
            if (s_.coord.partial()) {
                s_.outgoing = coord_msg();
            }
            break;
        case Stage::R3:
            refresh_role();
            break;
    }
}

void Agent::refresh_role() {
    if (s_.phase.stage() != Stage::R3 || s_.role.kind == Role::Kind::Departed) {
        return;
    }
    s_.role = config_->plan ? r3_role(*config_->plan, s_.coord, s_.dims, s_.phase.r3_step()) : Role::off();
    if (s_.role.kind == Role::Kind::Departed) {
        s_.departed_tick = s_.local_tick;
    }
}

CoordMsg Agent::coord_msg() const {
    CoordMsg m{s_.id, s_.coord, std::nullopt};
    if (s_.dims) {
        m.frame = std::pair{static_cast<std::uint16_t>(s_.dims->width), static_cast<std::uint16_t>(s_.dims->height)};
    }
    return m;
}

void Agent::on_coord(const CoordMsg& msg) {
    // middle agents only learn the frame shape this way
    if (!s_.dims && msg.frame && msg.frame->first > 0 && msg.frame->second > 0) {
        const auto [w, h] = *msg.frame;
        s_.dims = Dimensions{w, h, static_cast<std::uint32_t>(w) * h};
        if (s_.coord.assigned()) {
            s_.outgoing = coord_msg();
            refresh_role();
        }
    }
    auto* n = s_.find_neighbor(msg.id);
    if (!n) {
        return;
    }
    if (msg.coord.x != 0) {
        n->coord.x = msg.coord.x;
    }
    if (msg.coord.y != 0) {
        n->coord.y = msg.coord.y;
    }
    if (s_.phase.stage() >= Stage::Sr2c) {
        infer_coords();
    }
}

void Agent::infer_coords() {
    if (s_.coord.assigned()) {
        return;
    }
    std::vector<Coord> seen;
    seen.reserve(s_.neighbors.size());
    for (const auto& n : s_.neighbors) {
        if (n.coord.partial()) {
            seen.push_back(n.coord);
        }
    }
    const auto inferred = infer_middle_coord(seen);
    const Coord before = s_.coord;
    if (s_.coord.x == 0 && inferred.x) {
        s_.coord.x = *inferred.x;
    }
    if (s_.coord.y == 0 && inferred.y) {
        s_.coord.y = *inferred.y;
    }
    if (s_.coord != before) {
        s_.outgoing = coord_msg();
        if (s_.coord.assigned()) {
            refresh_role();
        }
    }
}

void Agent::on_message(const Payload& payload, double dist_mm, Rng& rng) {
    if (silent()) {
        return;
    }
    const auto decoded = decode(payload);
    if (!decoded) {
        return;
    }
    const Message& msg = *decoded;
    if (const auto* sync = std::get_if<SyncMsg>(&msg)) {
        advance(SyncTrigger::message(sync->target), rng);
        return;
    }

    switch (s_.phase.stage()) {
        case Stage::Sr1aP1:
            sr1a_handle(s_, msg, rng);
            break;
        case Stage::Sr1aP2:
            sr1a_handle(s_, msg, rng);
            track_min_distance(s_, dist_mm, config_->body_length_mm);
            if (const auto* relay = std::get_if<RelayMsg>(&msg)) {
                note_direct(*relay, dist_mm);
            }
            break;
        case Stage::Sr1bP2:
            if (const auto id = sender_id(msg); id && std::holds_alternative<IdMsg>(msg)) {
                auto& r = readings_[id->value];
                if (r.count == 0) {
                    reading_order_.push_back(*id);
                }
                r.sum += dist_mm;
                ++r.count;
            }
            break;
        case Stage::Sr1bRepair:
            if (const auto* repair = std::get_if<RepairMsg>(&msg); repair && config_->repair_enabled) {
                sr1b_repair(s_, *repair, dist_mm);
            }
            break;
        case Stage::Sr1c:
            if (const auto* count = std::get_if<CountMsg>(&msg)) {
                sr1c_handle(s_, *count);
            }
            break;
        case Stage::Sr2aElect:
            if (const auto* token = std::get_if<TokenMsg>(&msg)) {
                sr2a_elect(s_, *token);
            }
            break;
        case Stage::Sr2aAxes:
        case Stage::Sr2bCount:
            if (const auto* axes = std::get_if<AxesMsg>(&msg)) {
                const bool was_21 = s_.coord == Coord{2, 1};
                sr2a_axes_handle(s_, *axes);
                if (!was_21 && s_.coord == Coord{2, 1} && s_.phase.stage() == Stage::Sr2bCount) {
                    s_.outgoing = BorderCountMsg{needs_near_corner_header(s_), false, 2, 0, 0, 0};
                }
            } else if (const auto* count = std::get_if<BorderCountMsg>(&msg)) {
                if (sr2b_count_step(s_, *count, dist_mm) == StepOutcome::OriginComplete) {
                    advance(SyncTrigger::local(), rng);
                }
            }
            break;
        case Stage::Sr2bDistribute:
            if (const auto* totals = std::get_if<TotalsMsg>(&msg)) {
                if (sr2b_distribute(s_, *totals) == StepOutcome::OriginComplete) {
                    advance(SyncTrigger::local(), rng);
                }
            } else if (const auto* coord = std::get_if<CoordMsg>(&msg)) {
                on_coord(*coord);
            }
            break;
        case Stage::Sr2c:
        case Stage::R3:
            if (const auto* coord = std::get_if<CoordMsg>(&msg)) {
                on_coord(*coord);
            }
            break;
    }
}

void Agent::note_direct(const RelayMsg& msg, double dist_mm) {
    if (config_->clash_gap_mm <= 0.0 || (msg.id == s_.id && msg.nonce == s_.nonce)) {
        return;
    }
    const std::pair key{msg.id, msg.nonce};
    auto [it, fresh] = spread_.try_emplace(key, Spread{dist_mm, dist_mm, false});
    auto& sp = it->second;
    sp.lo = std::min(sp.lo, dist_mm);
    sp.hi = std::max(sp.hi, dist_mm);
    if (!sp.flagged && sp.hi - sp.lo > config_->clash_gap_mm) {
        sp.flagged = true;
        clashes_.push_back(key);
    }
}

std::optional<Message> Agent::compose() {
    switch (s_.phase.stage()) {
        case Stage::Sr1aP1:
        case Stage::Sr1bP2:
            return IdMsg{s_.id};
        case Stage::Sr1aP2: {
            RelayMsg m{s_.id, s_.nonce, std::nullopt};
            if (s_.id_list.empty()) {
                return m;
            }
            // Entries sharing an ID under different nonces are a known collision; every other
            // message relays one of them so both owners get to see the foreign nonce.
            std::vector<std::size_t> clashing;
            for (std::size_t a = 0; a < s_.id_list.size(); ++a) {
                for (std::size_t b = 0; b < s_.id_list.size(); ++b) {
                    if (a != b && s_.id_list[a].first == s_.id_list[b].first) {
                        clashing.push_back(a);
                        break;
                    }
                }
            }
            ++s_.relay_turn;
            if (!clashes_.empty() && s_.relay_turn % 2 == 0) {
                // Same pair heard from two places: hand both owners a nonce that is not theirs.
                const auto [id, nonce] = clashes_[(s_.relay_turn / 2) % clashes_.size()];
                m.relay = std::pair{id, Nonce{static_cast<std::uint8_t>(nonce.value ^ 0x80)}};
            } else if (!clashing.empty() && s_.relay_turn % 2 == 0) {
                m.relay = s_.id_list[clashing[(s_.relay_turn / 2) % clashing.size()]];
            } else {
                s_.relay_cursor %= s_.id_list.size();
                m.relay = s_.id_list[s_.relay_cursor++];
            }
            return m;
        }
        case Stage::Sr1bRepair: {
            if (!config_->repair_enabled) {
                return IdMsg{s_.id};
            }
            RepairMsg m{s_.id, {}};
            const std::size_t n = s_.neighbors.size();
            const std::size_t take = std::min(n, RepairMsg::kMaxIds);
            if (n > 0) {
                s_.repair_cursor %= n;
            }
            for (std::size_t k = 0; k < take; ++k) {
                m.neighbours.push_back(s_.neighbors[(s_.repair_cursor + k) % n].id);
            }
            if (n > RepairMsg::kMaxIds) {
                s_.repair_cursor += take;
            }
            return m;
        }
        case Stage::Sr1c:
            return CountMsg{s_.id, s_.neighbor_count(), s_.position};
        default:
            return s_.outgoing;
    }
}

std::optional<Payload> Agent::on_tick(Rng& rng) {
    ++s_.local_tick;
    if (const auto limit = config_->phase_duration(s_.phase); limit && s_.local_tick - s_.phase_start_tick >= *limit) {
        advance(SyncTrigger::timer(), rng);
    }
    if (silent() || (s_.local_tick + tx_offset_) % config_->msg_period_ticks != 0) {
        return std::nullopt;
    }
    std::optional<Message> msg;
    if (s_.sync_pending) {
        s_.sync_pending = false;
        msg = SyncMsg{s_.phase};
    } else {
        msg = compose();
    }
    if (!msg) {
        return std::nullopt;
    }
    return encode(*msg);
}

}  // namespace latticeloc
