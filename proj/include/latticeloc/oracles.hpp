#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "latticeloc/types.hpp"

namespace latticeloc {

struct SuiteReport {
    std::string name;
    bool pass = true;
    std::size_t cases = 0;
    std::string detail;
    std::vector<std::string> notes;
};

/// Perimeter cells of an m x n grid walked counter-clockwise from (1,1) along the x axis.
std::vector<Coord> perimeter_walk(std::uint32_t m, std::uint32_t n);

/// Checks corner_border_coords and swarm_dimensions against the walk for every 3 <= m,n <= max_side.
SuiteReport perimeter_suite(std::uint32_t max_side = 40);

/// Seeds the perimeter of an m x n grid with true coordinates (partial ones when `partial`)
/// and repeats synchronous rounds of infer_middle_coord over Moore neighbours until nothing
/// changes. Returns the number of interior cells left wrong or unassigned.
std::size_t middle_closure_errors(std::uint32_t m, std::uint32_t n);

/// `count` random lattices with sides in [3,40] x [3,25], drawn from `seed`.
SuiteReport middle_closure_suite(std::size_t count = 100, std::uint64_t seed = 7);

struct SweepConfig {
    double x_lo = 33.0;
    double x_hi = 110.0;
    double step = 1.0;
    std::vector<double> eps{0.0, 0.05, 0.1, 0.2, 0.3, 0.35};
};

/// Radius and spacing-bound sweep. Out-of-domain eps values are reported as notes
/// (EPS_OUT_OF_RANGE) and do not fail the suite.
SuiteReport eq1_sweep_suite(const SweepConfig& cfg = {});

}  // namespace latticeloc
