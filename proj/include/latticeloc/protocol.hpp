#pragma once

#include <bitset>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "latticeloc/message.hpp"
#include "latticeloc/plan.hpp"
#include "latticeloc/types.hpp"

namespace latticeloc {

/// Phase lengths in local control-loop ticks (32 per second nominal).
struct Timers {
    std::uint32_t t1 = 300;            // end of ID draw, phase 1
    std::uint32_t t2 = 800;            // end of duplicated-ID detection
    std::uint32_t t3 = 1600;           // end of neighbour list creation
    std::uint32_t t4 = 400;            // origin election window
    std::uint32_t repair_delay = 160;  // distance filtering before the repair phase starts
    std::uint32_t sr1c = 320;
    std::uint32_t axes = 160;
    std::uint32_t sr2c = 640;
    std::uint32_t r3_step = 256;

    /// Throws Error(InvalidSpec) when the limits are not increasing.
    void validate() const;
};

struct ProtocolConfig {
    Timers timers;
    std::uint32_t msg_period_ticks = 16;
    double body_length_mm = 33.0;
    bool repair_enabled = true;
    std::shared_ptr<const ActionPlan> plan;
    std::uint32_t depart_silence_ticks = 32;
    /// Receptions of the same perimeter count, each within the radius, needed before acting on it.
    std::uint32_t count_confirmations = 2;
    /// A direct (id, nonce) pair read at distances further apart than this is two agents.
    /// Zero turns the check off.
    double clash_gap_mm = 25.0;

    /// nullopt for phases that only end on a synchronisation message.
    std::optional<std::uint32_t> phase_duration(Phase p) const;
};

enum class Fault : std::uint8_t { None, FullBlacklist, Isolated, OriginDegenerate, CountInconsistent };

std::string_view to_string(Fault f);

struct NeighborRecord {
    LocalId id;
    double last_distance_mm = 0.0;
    std::optional<std::uint8_t> neighbor_count;
    PositionGroup position = PositionGroup::Unknown;
    Coord coord;
};

using Blacklist = std::bitset<256>;

struct AgentState {
    LocalId id;
    Nonce nonce;
    Phase phase;
    std::uint32_t phase_start_tick = 0;
    std::uint32_t local_tick = 0;

    Blacklist blacklist;
    std::vector<std::pair<LocalId, Nonce>> id_list;
    std::size_t relay_cursor = 0;
    std::size_t relay_turn = 0;

    std::vector<NeighborRecord> neighbors;
    std::optional<double> min_msg_distance;
    std::size_t repair_cursor = 0;
    PositionGroup position = PositionGroup::Unknown;

    bool origin_candidate = false;
    bool is_origin = false;
    OriginToken origin_token;
    std::optional<OriginToken> relayed_token;
    std::optional<LocalId> origin_id;

    std::uint16_t my_count = 0;
    bool count_source_corner = false;
    std::uint16_t c1 = 0;
    std::uint16_t c2 = 0;
    std::uint16_t c3 = 0;
    std::uint16_t total_count = 0;
    std::uint32_t count_confirmations = 1;
    std::optional<BorderCountMsg> pending_count;
    std::uint32_t pending_hits = 0;
    bool totals_known = false;
    std::optional<Dimensions> dims;

    Coord coord;
    Role role;
    std::optional<std::uint32_t> departed_tick;

    std::optional<Message> outgoing;
    bool sync_pending = false;
    Fault fault = Fault::None;
    std::uint32_t phase_skew_events = 0;

    NeighborRecord* find_neighbor(LocalId who);
    const NeighborRecord* find_neighbor(LocalId who) const;
    std::uint8_t neighbor_count() const { return static_cast<std::uint8_t>(neighbors.size()); }
    std::optional<double> radius() const;
};

// ---------------------------------------------------------------------------
// Routine R1

/// Rejection-samples a byte from `gen` until it falls outside the blacklist.
/// Throws Error(FullBlacklist) when every ID is blacklisted.
template <class Gen>
LocalId pick_fresh_id(const Blacklist& blacklist, Gen& gen) {
    if (blacklist.all()) {
        throw Error(ErrorCode::FullBlacklist, "all 256 IDs are blacklisted");
    }
    for (;;) {
        const auto candidate = static_cast<std::uint8_t>(gen() & 0xFF);
        if (!blacklist.test(candidate)) {
            return LocalId{candidate};
        }
    }
}

/// ID draw and duplicated-ID detection. Only acts in SR1A_P1 and SR1A_P2.
void sr1a_handle(AgentState& s, const Message& msg, Rng& rng);

/// Tracks the shortest plausible sender distance.
void track_min_distance(AgentState& s, double dist_mm, double body_length_mm);

/// Adds `sender` when it is closer than the neighbourhood radius. Only acts in SR1B_P2.
void sr1b_filter(AgentState& s, LocalId sender, double dist_mm);

/// Adopts a sender that lists this agent as a neighbour. Only acts in SR1B_REPAIR.
void sr1b_repair(AgentState& s, const RepairMsg& msg, double dist_mm);

/// CORNER below every neighbour's count, MIDDLE at or above all of them, BORDER otherwise.
/// FAULT when there are no neighbours.
PositionGroup classify_position(unsigned my_count, std::span<const unsigned> neighbor_counts);

/// Records a neighbour's count and position; classifies once every count is known.
void sr1c_handle(AgentState& s, const CountMsg& msg);

/// Classifies from whatever counts arrived; used when SR1C ends with some still missing.
void sr1c_finalize(AgentState& s);

// ---------------------------------------------------------------------------
// Routine R2

/// Minimum-token flooding election.
void sr2a_elect(AgentState& s, const TokenMsg& msg);

/// Origin side of axis assignment: sets (1,1) and the axes broadcast.
/// Throws Error(OriginDegenerate) unless exactly two neighbours are BORDER.
AxesMsg sr2a_assign_axes(AgentState& s);

/// BORDER side: lower-ID border takes (2,1), the other one (1,2).
void sr2a_axes_handle(AgentState& s, const AxesMsg& msg);

enum class StepOutcome { None, Accepted, OriginComplete };

/// Perimeter count hop. `dist_mm` must be below the neighbourhood radius to be considered, and
/// the same message must have arrived `s.count_confirmations` times in a row.
StepOutcome sr2b_count_step(AgentState& s, const BorderCountMsg& msg, double dist_mm);

/// True when a border still has a non-origin CORNER neighbour ahead of it in counting
/// order, so its count must use the header only corners read.
bool needs_near_corner_header(const AgentState& s);

/// Totals relay in counting order; the origin completes when its last border hands them back.
StepOutcome sr2b_distribute(AgentState& s, const TotalsMsg& msg);

/// Coordinates of a CORNER or BORDER agent from its perimeter count.
/// Throws Error(CountInconsistent) if the result falls outside [1,c1] x [1,c2-c1+1].
Coord corner_border_coords(std::uint32_t my_count, std::uint32_t c1, std::uint32_t c2, std::uint32_t c3);

struct AxisAssignment {
    std::optional<std::uint16_t> x;
    std::optional<std::uint16_t> y;
};

/// An axis is the middle value of three consecutive values reported by neighbours on that axis.
AxisAssignment infer_middle_coord(std::span<const Coord> neighbor_coords);

/// Throws Error(CountInconsistent) unless c3-c2+1 == c1 and total == 2(w+h)-4.
Dimensions swarm_dimensions(std::uint32_t c1, std::uint32_t c2, std::uint32_t c3, std::uint32_t total);

// ---------------------------------------------------------------------------
// Synchronisation and R3

struct SyncTrigger {
    enum class Kind { Timer, Message, Local };
    Kind kind = Kind::Timer;
    Phase target;  // Message only

    static SyncTrigger timer() { return {Kind::Timer, {}}; }
    static SyncTrigger local() { return {Kind::Local, {}}; }
    static SyncTrigger message(Phase p) { return {Kind::Message, p}; }
};

struct SyncOutcome {
    bool advanced = false;
    bool skewed = false;  // jumped more than one phase
};

/// Moves to the next phase on a timer or local event, or to the phase named by a SYNC
/// message when it is ahead. Resets the phase clock and queues one SYNC broadcast.
SyncOutcome sync_advance(AgentState& s, SyncTrigger trigger);

/// Plan lookup for an agent's coordinate. Frames taller than wide are read with x and y swapped.
Role r3_role(const ActionPlan& plan, Coord coord, std::optional<Dimensions> dims, std::uint32_t step);

}  // namespace latticeloc
