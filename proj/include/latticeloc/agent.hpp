#pragma once

#include <array>
#include <map>
#include <optional>

#include "latticeloc/message.hpp"
#include "latticeloc/protocol.hpp"

namespace latticeloc {

/// One agent's controller. Consumes received payloads and control-loop ticks,
/// produces at most one broadcast per message period.
class Agent {
  public:
    /// Draws the initial ID and the transmit slot offset from `rng`.
    Agent(const ProtocolConfig& config, Rng& rng);

    void on_message(const Payload& payload, double dist_mm, Rng& rng);

    /// Runs one control loop. Returns the payload to broadcast, if this loop transmits.
    std::optional<Payload> on_tick(Rng& rng);

    const AgentState& state() const { return s_; }
    AgentState& mutable_state() { return s_; }

    /// True while the agent has left the formation and stopped broadcasting.
    bool silent() const;

  private:
    void advance(SyncTrigger trigger, Rng& rng);
    void flush_distance_filter();
    void enter_phase(Rng& rng);
    void on_coord(const CoordMsg& msg);
    void infer_coords();
    CoordMsg coord_msg() const;
    void refresh_role();
    std::optional<Message> compose();

    const ProtocolConfig* config_;
    AgentState s_;
    std::uint32_t tx_offset_ = 0;

    // Per-sender distance readings gathered during SR1B_P2; the radius test runs on their mean.
    struct Readings {
        double sum = 0.0;
        std::uint32_t count = 0;
    };
    std::array<Readings, 256> readings_{};
    std::vector<LocalId> reading_order_;

    // SR1A_P2: distance range per directly heard (id, nonce), and pairs found to be two agents.
    struct Spread {
        double lo = 0.0;
        double hi = 0.0;
        bool flagged = false;
    };
    std::map<std::pair<LocalId, Nonce>, Spread> spread_;
    std::vector<std::pair<LocalId, Nonce>> clashes_;
    void note_direct(const RelayMsg& msg, double dist_mm);
};

}  // namespace latticeloc
