#include "latticeloc/engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "latticeloc/agent.hpp"
#include "latticeloc/geometry.hpp"

namespace latticeloc {

void NoiseModel::validate() const {
    if (!(drop_prob >= 0.0 && drop_prob <= 1.0)) {
        throw Error(ErrorCode::InvalidSpec, "drop_prob must lie in [0,1]");
    }
    if (!(dist_sigma_mm >= 0.0) || !(clock_skew_frac >= 0.0 && clock_skew_frac < 0.5)) {
        throw Error(ErrorCode::InvalidSpec, "sigma must be >= 0 and clock skew in [0,0.5)");
    }
    if (!(stressed_frac >= 0.0 && stressed_frac <= 1.0)) {
        throw Error(ErrorCode::InvalidSpec, "bias_frac must lie in [0,1]");
    }
}

std::uint32_t SimConfig::msg_period_ticks() const {
    return static_cast<std::uint32_t>(std::max(1.0, std::round(tick_rate / msg_rate)));
}

void SimConfig::validate() const {
    if (!(comm_range_mm > 0.0) || !(msg_rate > 0.0) || !(tick_rate > 0.0) || !(max_sim_seconds > 0.0)) {
        throw Error(ErrorCode::InvalidSpec, "comm_range, msg_rate, tick_rate and max_sim_seconds must be positive");
    }
    if (msg_rate > tick_rate) {
        throw Error(ErrorCode::InvalidSpec, "msg_rate cannot exceed tick_rate");
    }
}

void validate_range(const LatticeSpec& lattice, const SimConfig& sim) {
    const double r = neighborhood_radius(lattice.min_spacing());
    if (r > sim.comm_range_mm) {
        throw Error(ErrorCode::InvalidSpec, "neighbourhood radius " + std::to_string(r) + " mm exceeds comm_range " +
                                                std::to_string(sim.comm_range_mm) + " mm");
    }
}

std::string_view to_string(Outcome o) {
    switch (o) {
        case Outcome::Success:
            return "PASS";
        case Outcome::Fail:
            return "FAIL";
        case Outcome::Timeout:
            return "TIMEOUT";
    }
    return "?";
}

namespace {

struct Link {
    std::size_t to;
    double dist;
};

std::string corner_label(Coord c, std::uint32_t m, std::uint32_t n) {
    if (c == Coord{1, 1}) {
        return "BL";
    }
    if (c.x == m && c.y == 1) {
        return "BR";
    }
    if (c.x == 1 && c.y == n) {
        return "TL";
    }
    if (c.x == m && c.y == n) {
        return "TR";
    }
    return "none";
}

}  // namespace

RunResult run(const LatticeSpec& lattice, const SimConfig& sim, const NoiseModel& noise, ProtocolConfig protocol,
              const FrameSink& frames) {
    sim.validate();
    noise.validate();
    protocol.timers.validate();
    validate_range(lattice, sim);

    protocol.msg_period_ticks = sim.msg_period_ticks();
    if (protocol.plan) {
        protocol.timers.r3_step =
            static_cast<std::uint32_t>(std::max(1.0, std::round(protocol.plan->step_seconds * sim.tick_rate)));
    }

    RunResult res;
    res.seed = sim.seed;
    res.tick_rate = sim.tick_rate;

    Rng rng(sim.seed);
    res.truth = generate(lattice, rng);
    const GroundTruth& truth = res.truth;
    const std::size_t n = truth.size();
    const bool rectangular = lattice.topology == Topology::Rectangular;

    std::vector<double> skew(n, 1.0);
    if (noise.clock_skew_frac > 0.0) {
        std::uniform_real_distribution<double> u(-noise.clock_skew_frac, noise.clock_skew_frac);
        for (auto& s : skew) {
            s = 1.0 + u(rng);
        }
    }
    std::vector<double> sender_bias(n, 0.0);
    const auto stressed = static_cast<std::size_t>(std::llround(noise.stressed_frac * static_cast<double>(n)));
    if (stressed > 0) {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        std::size_t picked = 0;
        for (std::size_t k = 0; k < n && picked < stressed; ++k) {
            const std::size_t a = order[k];
            if (noise.stressed_apart && std::any_of(truth.adjacency[a].begin(), truth.adjacency[a].end(),
                                                    [&](std::size_t b) { return sender_bias[b] != 0.0; })) {
                continue;
            }
            sender_bias[a] = noise.stressed_bias_mm;
            ++picked;
        }
    }

    std::vector<Agent> agents;
    agents.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        agents.emplace_back(protocol, rng);
    }

    std::vector<std::vector<Link>> links(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) {
                continue;
            }
            const double d = distance(truth.positions[i], truth.positions[j]);
            if (d <= sim.comm_range_mm) {
                links[i].push_back({j, d});
            }
        }
    }
    res.comm_diameter = comm_diameter(truth, sim.comm_range_mm);
    res.desync_window_ticks = static_cast<std::uint64_t>(std::max<std::size_t>(res.comm_diameter, 1)) *
                              protocol.msg_period_ticks;

    std::bernoulli_distribution drop(noise.drop_prob);
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::vector<std::optional<Payload>> pending(n);
    std::vector<double> accum(n, 0.0);
    std::vector<std::uint16_t> last_phase(n, 0);
    res.phases.resize(1);
    res.phases[0].first = 0;
    res.phases[0].last = 0;

    auto record_entry = [&](std::uint16_t idx, std::uint64_t tick) {
        if (idx >= res.phases.size()) {
            res.phases.resize(idx + 1);
        }
        auto& span = res.phases[idx];
        if (!span.first) {
            span.first = tick;
        }
        span.last = tick;
    };
    // Agents that have reached at least phase p, for each p.
    std::vector<std::size_t> reached(1, n);
    auto mark_reached = [&](std::uint16_t from, std::uint16_t to) {
        if (to >= reached.size()) {
            reached.resize(to + 1, 0);
        }
        for (std::uint16_t p = from + 1; p <= to; ++p) {
            ++reached[p];
        }
    };

    const auto max_ticks = static_cast<std::uint64_t>(std::ceil(sim.max_sim_seconds * sim.tick_rate));
    const std::uint16_t elect_idx = static_cast<std::uint16_t>(Stage::Sr2aElect);
    const std::uint16_t r3_idx = static_cast<std::uint16_t>(Stage::R3);
    std::size_t coords_assigned = 0;
    std::vector<bool> has_coord(n, false);
    std::vector<Role> roles(n);
    std::vector<std::uint8_t> silent(n, 0);
    bool stop = false;

    std::uint64_t tick = 0;
    while (!stop && tick < max_ticks) {
        ++tick;

        for (std::size_t i = 0; i < n; ++i) {
            if (!pending[i]) {
                continue;
            }
            ++res.msgs_sent;
            const Payload payload = *pending[i];
            pending[i].reset();
            for (const auto& link : links[i]) {
                if (noise.drop_prob > 0.0 && drop(rng)) {
                    ++res.msgs_dropped;
                    continue;
                }
                double est = link.dist + noise.dist_bias_mm + sender_bias[i];
                if (noise.dist_sigma_mm > 0.0) {
                    est += noise.dist_sigma_mm * gauss(rng);
                }
                agents[link.to].on_message(payload, std::max(0.0, est), rng);
            }
        }

        for (std::size_t i = 0; i < n; ++i) {
            accum[i] += skew[i];
            while (accum[i] >= 1.0) {
                accum[i] -= 1.0;
                if (auto out = agents[i].on_tick(rng)) {
                    pending[i] = out;
                }
            }
        }

        std::uint16_t lo = UINT16_MAX;
        std::uint16_t hi = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto& s = agents[i].state();
            const std::uint16_t p = s.phase.index;
            if (p != last_phase[i]) {
                record_entry(p, tick);
                mark_reached(last_phase[i], p);
                last_phase[i] = p;
            }
            lo = std::min(lo, p);
            hi = std::max(hi, p);
            if (!has_coord[i] && s.coord.assigned()) {
                has_coord[i] = true;
                ++coords_assigned;
            }
            roles[i] = s.role;
            silent[i] = agents[i].silent();
        }
        res.max_phase_spread = std::max<std::uint32_t>(res.max_phase_spread, hi - lo);

        if (!res.r1_done_tick && reached.size() > elect_idx && reached[elect_idx] == n) {
            res.r1_done_tick = tick;
        }
        if (rectangular && !res.r2_done_tick && coords_assigned == n) {
            res.r2_done_tick = tick;
        }
        for (std::size_t step = res.r3.size(); r3_idx + step < reached.size() && reached[r3_idx + step] == n;
             step = res.r3.size()) {
            R3StepRecord rec;
            rec.first_tick = *res.phases[r3_idx + step].first;
            rec.last_tick = *res.phases[r3_idx + step].last;
            rec.roles = roles;
            res.r3.push_back(std::move(rec));
        }

        if (frames.every > 0 && frames.emit && tick % frames.every == 0) {
            frames.emit(tick, roles, silent);
        }

        if (!rectangular) {
            stop = res.r1_done_tick.has_value();
        } else if (protocol.plan) {
            stop = res.r3.size() > sim.r3_steps;
        } else {
            // Without a plan, two R3 steps after the last agent arrives is enough to call a stall.
            stop = res.r2_done_tick.has_value() ||
                   (reached.size() > r3_idx + 2u && reached[r3_idx + 2] == n);
        }
    }
    res.ticks = tick;

    res.agents.reserve(n);
    for (const auto& a : agents) {
        res.agents.push_back(a.state());
    }
    std::size_t origin_index = n;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& s = res.agents[i];
        res.phase_skew_events += s.phase_skew_events;
        if (s.fault != Fault::None) {
            ++res.faults;
        }
        switch (s.position) {
            case PositionGroup::Corner:
                ++res.groups.corners;
                break;
            case PositionGroup::Border:
                ++res.groups.borders;
                break;
            case PositionGroup::Middle:
                ++res.groups.middles;
                break;
            default:
                break;
        }
        if (s.is_origin) {
            ++res.origins;
            origin_index = i;
        }
    }
    res.election_tie = res.origins > 1;
    if (origin_index < n) {
        res.origin_dims = res.agents[origin_index].dims;
        if (rectangular) {
            res.origin_corner = corner_label(truth.true_coord[origin_index], lattice.cols, lattice.rows);
        }
    }

    if (!rectangular) {
        if (!res.r1_done_tick) {
            res.outcome = Outcome::Timeout;
            res.detail = "R1 did not complete";
        } else if (res.faults > 0) {
            res.outcome = Outcome::Fail;
            res.detail = std::to_string(res.faults) + " agents faulted";
        } else {
            res.outcome = Outcome::Success;
            res.detail = "R1 complete";
        }
        return res;
    }

    std::vector<Coord> assigned;
    assigned.reserve(n);
    for (const auto& s : res.agents) {
        assigned.push_back(s.coord);
    }
    if (!res.r2_done_tick) {
        const bool stalled = stop;
        res.outcome = stalled ? Outcome::Fail : Outcome::Timeout;
        res.detail = std::to_string(n - coords_assigned) + " agents without coordinates";
        if (stalled) {
            res.verify = verify_coords(assigned, truth);
        }
        return res;
    }
    res.verify = verify_coords(assigned, truth);
    if (!res.verify->pass) {
        res.outcome = Outcome::Fail;
        res.detail = res.verify->detail;
    } else if (protocol.plan && res.r3.size() <= sim.r3_steps) {
        res.outcome = Outcome::Timeout;
        res.detail = "plan did not reach step " + std::to_string(sim.r3_steps);
    } else {
        res.outcome = Outcome::Success;
        res.detail = res.verify->detail;
    }
    return res;
}

}  // namespace latticeloc
