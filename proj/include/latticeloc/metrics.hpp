#pragma once

#include <string>

#include "latticeloc/engine.hpp"

namespace latticeloc {

inline constexpr const char* kMetricsHeader =
    "seed,success,completion_s,phase_r1_s,phase_r2_s,origin_corner,symmetry,msgs_sent,msgs_dropped";

/// One CSV row (no trailing newline). Times have three decimals; missing values are empty.
std::string metrics_row(const RunResult& r);

}  // namespace latticeloc
