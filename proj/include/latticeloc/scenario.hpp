#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "latticeloc/engine.hpp"

namespace latticeloc {

/// Everything one run needs, as read from a `key = value` scenario file.
struct Scenario {
    LatticeSpec lattice;
    SimConfig sim;
    NoiseModel noise;
    Timers timers;
    bool repair = true;
    double body_length_mm = 33.0;
    std::uint32_t depart_silence_ticks = 32;
    std::string plan_path;  // resolved against the scenario file's directory
    std::uint64_t frames_every = 0;

    /// Loads the plan (if any) and assembles the agent configuration.
    ProtocolConfig protocol() const;

    /// Throws Error(InvalidSpec) for inconsistent settings.
    void validate() const;
};

/// Keys: topology, cols, rows, row_lengths, dx_mm, dy_mm, jitter_eps, seed, comm_range_mm,
/// drop_prob, dist_sigma_mm, dist_bias_mm, clock_skew, bias_frac, bias_mm, msg_rate, tick_rate,
/// max_sim_seconds, plan, r3_steps, repair, t1, t2, t3, t4, repair_delay, sr1c_ticks,
/// axes_ticks, sr2c_ticks, body_length_mm, depart_silence_ticks, frames_every.
/// Throws Error(ParseError) naming the line.
Scenario parse_scenario(std::string_view text, const std::string& base_dir = ".");

Scenario load_scenario(const std::string& path);

}  // namespace latticeloc
