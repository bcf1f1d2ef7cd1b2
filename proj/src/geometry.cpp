#include "latticeloc/geometry.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "latticeloc/types.hpp"

namespace latticeloc {

double spacing_bound(double x_mm, double eps) {
    const double q = (3.0 * eps - 1.0) * (eps - 3.0);  // 3e^2 - 10e + 3
    if (eps < 0.0 || q <= 0.0) {
        throw Error(ErrorCode::EpsOutOfRange, "placement error eps=" + std::to_string(eps) + " outside feasible domain");
    }
    return x_mm * std::sqrt(q) / std::sqrt(eps * eps + 2.0 * eps + 1.0);
}

bool spacing_feasible(double x_mm, double y_mm, double eps) {
    if (x_mm > y_mm) {
        std::swap(x_mm, y_mm);
    }
    if (!(x_mm > 0.0)) {
        throw Error(ErrorCode::InvalidSpec, "spacing must be positive");
    }
    return y_mm < spacing_bound(x_mm, eps);
}

}  // namespace latticeloc
