#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <thread>

#include "latticeloc/metrics.hpp"
#include "latticeloc/oracles.hpp"
#include "latticeloc/render.hpp"
#include "latticeloc/scenario.hpp"

namespace fs = std::filesystem;
using namespace latticeloc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitTimeout = 2;
constexpr int kExitUsage = 64;

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<double> drop;
    std::optional<double> sigma;
    std::optional<double> bias_frac;
    std::optional<double> skew;
    std::optional<std::uint64_t> frames_every;
    std::optional<std::string> plan;
    std::optional<std::uint32_t> t1, t2, t3, t4;
    std::optional<std::uint32_t> steps;
    std::optional<double> max_seconds;
    bool no_repair = false;

    void add_to(CLI::App& cmd) {
        cmd.add_option("--drop", drop, "message drop probability");
        cmd.add_option("--sigma", sigma, "distance noise std (mm)");
        cmd.add_option("--bias-frac", bias_frac, "fraction of agents with a +bias_mm distance bias");
        cmd.add_option("--skew", skew, "clock skew fraction");
        cmd.add_option("--frames-every", frames_every, "write a frame every N global ticks");
        cmd.add_option("--plan", plan, "action plan file");
        cmd.add_option("--t1", t1, "end of ID draw (ticks)");
        cmd.add_option("--t2", t2, "end of duplicate-ID detection (ticks)");
        cmd.add_option("--t3", t3, "end of neighbour list creation (ticks)");
        cmd.add_option("--t4", t4, "origin election window (ticks)");
        cmd.add_option("--steps", steps, "R3 steps to run with a plan");
        cmd.add_option("--max-seconds", max_seconds, "simulated time limit");
        cmd.add_flag("--no-repair", no_repair, "disable the neighbour-list repair phase");
    }

    void apply(Scenario& sc) const {
        if (seed) sc.sim.seed = *seed;
        if (drop) sc.noise.drop_prob = *drop;
        if (sigma) sc.noise.dist_sigma_mm = *sigma;
        if (bias_frac) sc.noise.stressed_frac = *bias_frac;
        if (skew) sc.noise.clock_skew_frac = *skew;
        if (frames_every) sc.frames_every = *frames_every;
        if (plan) sc.plan_path = *plan;
        if (t1) sc.timers.t1 = *t1;
        if (t2) sc.timers.t2 = *t2;
        if (t3) sc.timers.t3 = *t3;
        if (t4) sc.timers.t4 = *t4;
        if (steps) sc.sim.r3_steps = *steps;
        if (max_seconds) sc.sim.max_sim_seconds = *max_seconds;
        if (no_repair) sc.repair = false;
    }
};

int exit_code(Outcome o) {
    switch (o) {
        case Outcome::Success:
            return kExitOk;
        case Outcome::Fail:
            return kExitFail;
        case Outcome::Timeout:
            return kExitTimeout;
    }
    return kExitFail;
}

void write_file(const fs::path& p, const std::string& data) {
    std::ofstream out(p, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + p.string());
    }
    out << data;
}

std::string frame_name(std::uint64_t tick, const char* ext) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "frame_%06llu.%s", static_cast<unsigned long long>(tick), ext);
    return buf;
}

int cmd_run(const std::string& path, const Overrides& ov, const std::string& out_dir) {
    Scenario sc = load_scenario(path);
    ov.apply(sc);
    sc.validate();
    const ProtocolConfig protocol = sc.protocol();

    fs::create_directories(out_dir);
    FrameSink frames;
    std::optional<GroundTruth> truth;
    if (sc.frames_every > 0) {
        const fs::path dir = fs::path(out_dir) / "frames";
        fs::create_directories(dir);
        Rng rng(sc.sim.seed);
        truth = generate(sc.lattice, rng);
        frames.every = sc.frames_every;
        frames.emit = [&, dir](std::uint64_t tick, std::span<const Role> roles, std::span<const std::uint8_t> silent) {
            const Frame f = render_frame(*truth, roles, silent);
            write_file(dir / frame_name(tick, "txt"), to_ascii(f));
            write_file(dir / frame_name(tick, "ppm"), to_ppm(f));
        };
    }

    const RunResult r = run(sc.lattice, sc.sim, sc.noise, protocol, frames);
    write_file(fs::path(out_dir) / "metrics.csv", std::string(kMetricsHeader) + "\n" + metrics_row(r) + "\n");

    std::cout << to_string(r.outcome);
    if (r.verify && r.verify->pass) {
        std::cout << "(" << to_string(*r.verify->symmetry) << ")";
    }
    std::cout << " seed=" << r.seed << " sim_s=" << r.seconds(r.ticks);
    if (r.r2_done_tick) {
        std::cout << " r2_s=" << r.seconds(*r.r2_done_tick);
    }
    if (r.origin_dims) {
        std::cout << " dims=" << r.origin_dims->width << "x" << r.origin_dims->height;
    }
    std::cout << " groups=" << r.groups.corners << "/" << r.groups.borders << "/" << r.groups.middles;
    if (r.phase_skew_events > 0) {
        std::cout << " phase_skew=" << r.phase_skew_events;
    }
    if (r.election_tie) {
        std::cout << " ELECTION_TIE";
    }
    std::cout << "\n";
    if (!r.success()) {
        std::cout << r.detail << "\n";
    }
    return exit_code(r.outcome);
}

std::pair<std::uint64_t, std::uint64_t> parse_seed_range(const std::string& s) {
    const auto dots = s.find("..");
    if (dots == std::string::npos) {
        throw CLI::ValidationError("--seeds", "expected A..B");
    }
    const auto a = std::stoull(s.substr(0, dots));
    const auto b = std::stoull(s.substr(dots + 2));
    if (b < a) {
        throw CLI::ValidationError("--seeds", "empty seed range");
    }
    return {a, b};
}

int cmd_batch(const std::string& path, const Overrides& ov, const std::string& seeds, const std::string& out_dir,
              unsigned jobs) {
    const auto [first, last] = parse_seed_range(seeds);
    Scenario base = load_scenario(path);
    ov.apply(base);
    base.frames_every = 0;
    base.validate();
    const ProtocolConfig protocol = base.protocol();

    const std::size_t count = last - first + 1;
    std::vector<std::optional<RunResult>> results(count);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t k = next++; k < count; k = next++) {
            try {
                SimConfig sim = base.sim;
                sim.seed = first + k;
                results[k] = run(base.lattice, sim, base.noise, protocol);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                failure = std::current_exception();
            }
        }
    };
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(count)));
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) {
        pool.emplace_back(worker);
    }
    for (auto& t : pool) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    fs::create_directories(out_dir);
    std::string csv = std::string(kMetricsHeader) + "\n";
    std::size_t passed = 0;
    std::size_t timeouts = 0;
    std::vector<double> completion;
    for (const auto& r : results) {
        csv += metrics_row(*r) + "\n";
        if (r->success()) {
            ++passed;
            completion.push_back(r->seconds(r->r2_done_tick ? *r->r2_done_tick : r->ticks));
        } else if (r->outcome == Outcome::Timeout) {
            ++timeouts;
        }
    }
    write_file(fs::path(out_dir) / "metrics.csv", csv);

    double median = 0.0;
    if (!completion.empty()) {
        std::sort(completion.begin(), completion.end());
        const auto mid = completion.size() / 2;
        median = completion.size() % 2 ? completion[mid] : 0.5 * (completion[mid - 1] + completion[mid]);
    }
    char line[160];
    std::snprintf(line, sizeof line, "runs=%zu passed=%zu success_rate=%.3f median_completion_s=%.3f", count, passed,
                  static_cast<double>(passed) / static_cast<double>(count), median);
    std::cout << line << "\n";
    if (passed == count) {
        return kExitOk;
    }
    return passed + timeouts == count ? kExitTimeout : kExitFail;
}

int cmd_verify(const std::vector<double>& eps) {
    SweepConfig sweep;
    if (!eps.empty()) {
        sweep.eps = eps;
    }
    const SuiteReport reports[] = {perimeter_suite(40), middle_closure_suite(100, 7), eq1_sweep_suite(sweep)};
    bool ok = true;
    for (const auto& r : reports) {
        std::cout << r.name << ": " << (r.pass ? "PASS" : "FAIL") << " (" << r.detail << ")\n";
        for (const auto& note : r.notes) {
            std::cout << "  " << note << "\n";
        }
        ok = ok && r.pass;
    }
    return ok ? kExitOk : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lattice self-localisation swarm simulator"};
    app.require_subcommand(1);

    Overrides run_ov;
    std::string run_path;
    std::string run_out = "out";
    auto* run_cmd = app.add_subcommand("run", "run one seeded simulation");
    run_cmd->add_option("scenario", run_path, "scenario file")->required();
    run_cmd->add_option("--seed", run_ov.seed, "random seed");
    run_cmd->add_option("--out", run_out, "output directory");
    run_ov.add_to(*run_cmd);

    Overrides batch_ov;
    std::string batch_path;
    std::string batch_seeds;
    std::string batch_out = "out";
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
    auto* batch_cmd = app.add_subcommand("batch", "run a range of seeds");
    batch_cmd->add_option("scenario", batch_path, "scenario file")->required();
    batch_cmd->add_option("--seeds", batch_seeds, "seed range A..B")->required();
    batch_cmd->add_option("--out", batch_out, "output directory");
    batch_cmd->add_option("--jobs", jobs, "parallel workers");
    batch_ov.add_to(*batch_cmd);

    std::vector<double> eps;
    auto* verify_cmd = app.add_subcommand("verify", "run the oracle suites");
    verify_cmd->add_option("--eps", eps, "eps values for the spacing-bound sweep");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (*run_cmd) {
            return cmd_run(run_path, run_ov, run_out);
        }
        if (*batch_cmd) {
            return cmd_batch(batch_path, batch_ov, batch_seeds, batch_out, jobs);
        }
        return cmd_verify(eps);
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
