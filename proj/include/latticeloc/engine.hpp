#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "latticeloc/lattice.hpp"
#include "latticeloc/protocol.hpp"

namespace latticeloc {

struct NoiseModel {
    double drop_prob = 0.0;
    double dist_sigma_mm = 0.0;
    double dist_bias_mm = 0.0;
    double clock_skew_frac = 0.0;
    /// Fraction of agents whose transmissions are read as farther away by `stressed_bias_mm`.
    double stressed_frac = 0.0;
    double stressed_bias_mm = 15.0;
    /// Keep stressed agents off each other's neighbour lists so every biased link stays one-sided.
    bool stressed_apart = true;

    void validate() const;
};

struct SimConfig {
    std::uint64_t seed = 1;
    double comm_range_mm = 100.0;
    double msg_rate = 2.0;
    double tick_rate = 32.0;
    double max_sim_seconds = 900.0;
    /// With a plan, the run ends once every agent has entered this R3 step.
    std::uint32_t r3_steps = 4;

    std::uint32_t msg_period_ticks() const;
    void validate() const;
};

/// Rejects ranges that cannot reach a Moore neighbour or that the neighbourhood radius exceeds.
void validate_range(const LatticeSpec& lattice, const SimConfig& sim);

enum class Outcome { Success, Fail, Timeout };

std::string_view to_string(Outcome o);

struct PhaseSpan {
    std::optional<std::uint64_t> first;  // global tick the first agent entered
    std::optional<std::uint64_t> last;   // global tick the last agent entered
};

struct R3StepRecord {
    std::uint64_t first_tick = 0;
    std::uint64_t last_tick = 0;
    std::vector<Role> roles;  // per agent, taken when the last agent entered the step
};

struct RunResult {
    std::uint64_t seed = 0;
    Outcome outcome = Outcome::Timeout;
    std::string detail;
    std::uint64_t ticks = 0;
    double tick_rate = 32.0;

    GroundTruth truth;
    std::vector<AgentState> agents;

    std::vector<PhaseSpan> phases;  // indexed by phase index
    std::optional<std::uint64_t> r1_done_tick;
    std::optional<std::uint64_t> r2_done_tick;
    std::vector<R3StepRecord> r3;

    std::optional<VerifyResult> verify;  // rectangular only
    GroupCounts groups;
    std::size_t faults = 0;
    std::size_t origins = 0;
    bool election_tie = false;
    std::string origin_corner;  // BL, BR, TL, TR or empty
    std::optional<Dimensions> origin_dims;

    std::uint64_t msgs_sent = 0;
    std::uint64_t msgs_dropped = 0;
    std::uint32_t max_phase_spread = 0;
    std::uint32_t phase_skew_events = 0;
    std::size_t comm_diameter = 0;
    std::uint64_t desync_window_ticks = 0;

    bool success() const { return outcome == Outcome::Success; }
    double seconds(std::uint64_t tick) const { return static_cast<double>(tick) / tick_rate; }
};

/// Called every `every` global ticks with the current per-agent roles.
struct FrameSink {
    std::uint64_t every = 0;
    std::function<void(std::uint64_t tick, std::span<const Role> roles, std::span<const std::uint8_t> silent)> emit;
};

/// Runs one seeded simulation. Stops after R1 on hexagonal lattices, once every coordinate
/// is assigned on rectangular lattices without a plan, or once every agent has entered
/// R3 step `sim.r3_steps` when a plan is configured.
RunResult run(const LatticeSpec& lattice, const SimConfig& sim, const NoiseModel& noise, ProtocolConfig protocol,
              const FrameSink& frames = {});

}  // namespace latticeloc
