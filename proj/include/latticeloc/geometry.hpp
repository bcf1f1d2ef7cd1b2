#pragma once

namespace latticeloc {

/// Neighbourhood filter radius derived from the shortest observed distance (mm).
constexpr double neighborhood_radius(double min_dist_mm) { return 1.5 * min_dist_mm + 10.0; }

/// Largest spacing y (exclusive) compatible with spacing x under placement error eps,
/// i.e. the bound below which a Moore-neighbourhood radius exists.
/// Throws Error(EpsOutOfRange) when 3eps^2 - 10eps + 3 <= 0 or eps < 0.
double spacing_bound(double x_mm, double eps);

/// True iff the (x, y) spacing pair admits a radius separating Moore neighbours from the
/// next ring under error eps. Inputs are swapped so that x <= y.
bool spacing_feasible(double x_mm, double y_mm, double eps);

}  // namespace latticeloc
